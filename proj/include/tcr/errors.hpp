#pragma once
// Error taxonomy for the thermoelastic Cauchy-reconstruction library.
// Every failure mode callers are expected to handle gets its own type so
// tests and the CLI can discriminate without string matching.

#include <stdexcept>
#include <string>

namespace tcr {

struct ParameterViolation : std::invalid_argument {
  std::string parameter;
  explicit ParameterViolation(const std::string& name)
      : std::invalid_argument("medium parameter constraint violated: " + name),
        parameter(name) {}
};

struct DegenerateRoots : std::runtime_error {
  DegenerateRoots()
      : std::runtime_error(
            "characteristic roots coincide; coupling coefficients undefined") {}
};

struct SingularPoint : std::domain_error {
  SingularPoint() : std::domain_error("kernel evaluated at its singular point") {}
};

struct QuadratureFailure : std::runtime_error {
  explicit QuadratureFailure(const std::string& what)
      : std::runtime_error("quadrature failure: " + what) {}
};

struct OnLightCone : std::domain_error {
  OnLightCone()
      : std::domain_error(
            "tau-derivative closed form is discontinuous at tau = k") {}
};

struct EvaluationOverflow : std::overflow_error {
  explicit EvaluationOverflow(const std::string& what)
      : std::overflow_error("evaluation overflow: " + what) {}
};

struct DifferentiationFailure : std::runtime_error {
  explicit DifferentiationFailure(const std::string& what)
      : std::runtime_error("numerical differentiation failure: " + what) {}
};

struct StandoffViolation : std::invalid_argument {
  explicit StandoffViolation(const std::string& what)
      : std::invalid_argument("evaluation point too close to the boundary: " +
                              what) {}
};

struct InvalidNoiseModel : std::invalid_argument {
  explicit InvalidNoiseModel(const std::string& what)
      : std::invalid_argument("invalid noise model: " + what) {}
};

struct SourceInsideDomain : std::invalid_argument {
  SourceInsideDomain()
      : std::invalid_argument(
            "manufactured-solution source must lie strictly outside the domain") {}
  explicit SourceInsideDomain(const std::string& what)
      : std::invalid_argument(
            "manufactured-solution source must lie strictly outside the domain: " +
            what) {}
};

struct DegenerateFit : std::runtime_error {
  explicit DegenerateFit(const std::string& what)
      : std::runtime_error("degenerate rate fit: " + what) {}
};

}  // namespace tcr
