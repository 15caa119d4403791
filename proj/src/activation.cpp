#include "stable_limits/activation.hpp"

#include <cmath>

#include "stable_limits/errors.hpp"

namespace stable_limits {

ActivationSpec::ActivationSpec(Id id, std::string name, std::function<double(double)> fn,
                               EnvelopeWitness witness, double growth_degree)
    : id_(id),
      name_(std::move(name)),
      fn_(std::move(fn)),
      witness_(witness),
      growth_degree_(growth_degree) {}

ActivationSpec ActivationSpec::tanh() {
  // gamma = 0.45 stays below 1/alpha for every alpha <= 2, and the bound
  // (1 + |s|)^0.45 >= 1 >= |tanh(s)| holds everywhere.
  return ActivationSpec(Id::tanh, "tanh", [](double s) { return std::tanh(s); },
                        EnvelopeWitness{1.0, 1.0, 1.0, 0.45}, 0.0);
}

ActivationSpec ActivationSpec::relu() {
  return ActivationSpec(Id::relu, "relu", [](double s) { return s > 0.0 ? s : 0.0; },
                        EnvelopeWitness{1.0, 1.0, 1.0, 0.45}, 1.0);
}

ActivationSpec ActivationSpec::identity() {
  return ActivationSpec(Id::identity, "identity", [](double s) { return s; },
                        EnvelopeWitness{1.0, 1.0, 1.0, 0.45}, 1.0);
}

ActivationSpec ActivationSpec::custom(std::string name, std::function<double(double)> fn,
                                      EnvelopeWitness witness) {
  return ActivationSpec(Id::custom, std::move(name), std::move(fn), witness, -1.0);
}

ActivationSpec ActivationSpec::from_name(const std::string& name) {
  if (name == "tanh") return tanh();
  if (name == "relu") return relu();
  if (name == "identity") return identity();
  throw error(errc::domain, "unknown activation '" + name + "' (expected tanh|relu|identity)");
}

EnvelopeReport validate_envelope(const ActivationSpec& activation, double alpha) {
  if (!(alpha > 0.0) || !(alpha <= 2.0))
    throw error(errc::domain, "alpha must lie in (0, 2]");
  const EnvelopeWitness& w = activation.witness();
  if (!(w.a > 0.0) || !(w.b > 0.0) || !(w.beta > 0.0) || !(w.gamma > 0.0))
    return {false, "witness parameters a, b, beta, gamma must all be positive"};
  if (!(w.gamma < 1.0 / alpha))
    return {false, "gamma = " + std::to_string(w.gamma) + " violates gamma < 1/alpha = " +
                       std::to_string(1.0 / alpha)};
  if (!(w.beta < 1.0 / w.gamma))
    return {false, "beta = " + std::to_string(w.beta) + " violates beta < 1/gamma = " +
                       std::to_string(1.0 / w.gamma)};
  // beta*gamma < 1 at this point, so any activation growing at degree >= 1
  // outruns the bound for large |s| no matter the witness.
  if (activation.growth_degree() >= 1.0)
    return {false, activation.name() +
                       " grows at degree >= 1; the bound allows at most degree beta*gamma = " +
                       std::to_string(w.beta * w.gamma) + " < 1"};
  for (int j = -3; j <= 3; ++j) {
    for (double sign : {-1.0, 1.0}) {
      const double s = sign * std::pow(10.0, j);
      const double bound = std::pow(w.a + w.b * std::pow(std::fabs(s), w.beta), w.gamma);
      if (!(std::fabs(activation(s)) <= bound))
        return {false, "witness bound fails at s = " + std::to_string(s) + ": |phi(s)| = " +
                           std::to_string(std::fabs(activation(s))) + " > " +
                           std::to_string(bound)};
    }
  }
  if (!(std::fabs(activation(0.0)) <= std::pow(w.a, w.gamma)))
    return {false, "witness bound fails at s = 0"};
  return {true, ""};
}

}  // namespace stable_limits
