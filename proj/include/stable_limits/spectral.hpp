#ifndef STABLE_LIMITS_SPECTRAL_HPP
#define STABLE_LIMITS_SPECTRAL_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "stable_limits/stream.hpp"

namespace stable_limits {

// Finite measure on the unit sphere S^(k-1) supported on finitely many atoms,
// defining a symmetric multivariate stable law through
//   cf(t) = exp(-sum_j w_j |t . s_j|^alpha).
//
// Invariants: every stored direction has unit norm (within 1e-12), every
// weight is strictly positive, and total mass is positive and finite. Atoms
// are kept in first-insertion order; directions within angular distance 1e-10
// are merged with their weights summed. Measures are immutable once built.
class DiscreteSpectralMeasure {
 public:
  struct Atom {
    std::vector<double> direction;
    double weight;
  };

  // `directions` is atom-major, n x dim. Directions are renormalized to unit
  // length; a zero-length direction is a shape error. Atoms with weight <= 0
  // are dropped; if nothing survives, construction fails (degenerate measure).
  DiscreteSpectralMeasure(int dim, std::span<const double> directions,
                          std::span<const double> weights);

  static DiscreteSpectralMeasure from_atoms(int dim, const std::vector<Atom>& atoms);

  int dim() const { return dim_; }
  std::size_t atom_count() const { return weights_.size(); }
  double total_mass() const;
  std::span<const double> direction(std::size_t j) const;
  double weight(std::size_t j) const { return weights_[j]; }

  // Internal layout accessors (atom-major directions).
  const std::vector<double>& directions_flat() const { return directions_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  DiscreteSpectralMeasure() = default;
  void merge_and_prune();

  int dim_ = 0;
  std::vector<double> directions_;
  std::vector<double> weights_;
};

// Replaces each atom (s, w) by (s, w/2) and (-s, w/2); coincident directions
// merge, so total mass is preserved exactly and the defined law is unchanged.
DiscreteSpectralMeasure symmetrize(const DiscreteSpectralMeasure& measure);

// exp(-sum_j w_j |t . s_j|^alpha), in (0, 1].
double multivariate_cf(const DiscreteSpectralMeasure& measure, double alpha,
                       std::span<const double> t);

// Scale of the r-th marginal (r is 1-based): (sum_j w_j |s_{j,r}|^alpha)^(1/alpha).
// Zero when every atom is orthogonal to coordinate r.
double marginal_scale(const DiscreteSpectralMeasure& measure, double alpha, int r);

// Draws `count` vectors (row-major count x dim) as sum_j w_j^(1/alpha) Z_j s_j
// over the symmetrized atoms, Z_j iid St(alpha, 1). Cost is linear in the atom
// count per sample. Sequential in the stream: same (kind, seed) reproduces the
// output bit for bit.
std::vector<double> sample_multivariate(const DiscreteSpectralMeasure& measure,
                                        double alpha, UniformStream& stream,
                                        std::size_t count);

}  // namespace stable_limits

#endif
