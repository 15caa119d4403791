#ifndef STABLE_LIMITS_ACTIVATION_HPP
#define STABLE_LIMITS_ACTIVATION_HPP

#include <functional>
#include <string>

namespace stable_limits {

// Witness for the growth bound |phi(s)| <= (a + b|s|^beta)^gamma.
struct EnvelopeWitness {
  double a;
  double b;
  double beta;
  double gamma;
};

class ActivationSpec {
 public:
  enum class Id { tanh, relu, identity, custom };

  static ActivationSpec tanh();
  static ActivationSpec relu();
  static ActivationSpec identity();
  // Caller-supplied evaluator with a declared witness. There is no automatic
  // witness inference, and behaviour between verification grid points is the
  // caller's responsibility.
  static ActivationSpec custom(std::string name, std::function<double(double)> fn,
                               EnvelopeWitness witness);

  static ActivationSpec from_name(const std::string& name);  // tanh|relu|identity

  double operator()(double s) const { return fn_(s); }
  Id id() const { return id_; }
  const std::string& name() const { return name_; }
  const EnvelopeWitness& witness() const { return witness_; }
  // Asymptotic growth degree, known for built-ins: 0 for bounded activations,
  // 1 for relu/identity. Negative when unknown (custom).
  double growth_degree() const { return growth_degree_; }

 private:
  ActivationSpec(Id id, std::string name, std::function<double(double)> fn,
                 EnvelopeWitness witness, double growth_degree);

  Id id_;
  std::string name_;
  std::function<double(double)> fn_;
  EnvelopeWitness witness_;
  double growth_degree_;
};

struct EnvelopeReport {
  bool accepted;
  std::string reason;  // violated constraint when rejected, empty otherwise
};

// Gate for the growth condition that keeps activation alpha-moments finite
// under heavy-tailed inputs. Accepts iff gamma < 1/alpha and beta < 1/gamma
// (both strict), the witness bound holds on the verification grid
// s in {0} u {+-10^j : j = -3..3}, and the activation's known growth degree is
// below beta*gamma (< 1 always, so linear-growth built-ins can never pass).
// Rejection is a structured report, not an exception.
EnvelopeReport validate_envelope(const ActivationSpec& activation, double alpha);

}  // namespace stable_limits

#endif
