#include "stable_limits/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stable_limits/errors.hpp"
#include "stable_limits/stable.hpp"

namespace stable_limits {

namespace {

constexpr double kMergeAngle = 1e-10;
constexpr double kPruneFraction = 1e-15;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Angular closeness via squared chord distance: |a-b|^2 ~ angle^2 for unit a, b.
bool directions_close(std::span<const double> a, std::span<const double> b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return d2 <= kMergeAngle * kMergeAngle;
}

}  // namespace

DiscreteSpectralMeasure::DiscreteSpectralMeasure(int dim,
                                                 std::span<const double> directions,
                                                 std::span<const double> weights) {
  if (dim < 1) throw error(errc::shape, "measure dimension must be >= 1");
  if (weights.size() * static_cast<std::size_t>(dim) != directions.size())
    throw error(errc::shape, "directions array size does not match atom count x dim");
  dim_ = dim;
  directions_.reserve(directions.size());
  weights_.reserve(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double w = weights[j];
    if (!std::isfinite(w)) throw error(errc::domain, "atom weight must be finite");
    if (w <= 0.0) continue;  // zero-weight atoms contribute nothing and are dropped
    std::span<const double> dir =
        directions.subspan(j * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
    const double n = norm2(dir);
    if (!(n > 0.0) || !std::isfinite(n))
      throw error(errc::shape, "atom direction must be a nonzero finite vector");
    for (double c : dir) directions_.push_back(c / n);
    weights_.push_back(w);
  }
  if (weights_.empty())
    throw error(errc::degenerate_data, "spectral measure has no atoms with positive weight");
  merge_and_prune();
}

DiscreteSpectralMeasure DiscreteSpectralMeasure::from_atoms(int dim,
                                                            const std::vector<Atom>& atoms) {
  std::vector<double> dirs;
  std::vector<double> wts;
  dirs.reserve(atoms.size() * static_cast<std::size_t>(dim));
  wts.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (static_cast<int>(a.direction.size()) != dim)
      throw error(errc::shape, "atom direction has wrong dimension");
    dirs.insert(dirs.end(), a.direction.begin(), a.direction.end());
    wts.push_back(a.weight);
  }
  return DiscreteSpectralMeasure(dim, dirs, wts);
}

void DiscreteSpectralMeasure::merge_and_prune() {
  const std::size_t n = weights_.size();
  const std::size_t k = static_cast<std::size_t>(dim_);
  // sort atom indices lexicographically by direction; near-identical
  // directions end up adjacent and merge in one scan
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(
        directions_.begin() + static_cast<std::ptrdiff_t>(a * k),
        directions_.begin() + static_cast<std::ptrdiff_t>((a + 1) * k),
        directions_.begin() + static_cast<std::ptrdiff_t>(b * k),
        directions_.begin() + static_cast<std::ptrdiff_t>((b + 1) * k));
  });
  auto dir_of = [&](std::size_t a) {
    return std::span<const double>(directions_.data() + a * k, k);
  };
  // walk the sorted order chaining neighbours; closeness is transitive along
  // a chain, which is what the tolerance merge wants
  std::vector<std::pair<std::size_t, double>> groups;  // (earliest index, weight)
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::size_t j = order[idx];
    if (idx == 0 || !directions_close(dir_of(order[idx - 1]), dir_of(j)))
      groups.emplace_back(j, 0.0);
    auto& g = groups.back();
    g.first = std::min(g.first, j);
    g.second += weights_[j];
  }
  // representatives in first-insertion order
  std::sort(groups.begin(), groups.end());
  double mass = 0.0;
  for (const auto& g : groups) mass += g.second;
  std::vector<double> dirs;
  std::vector<double> wts;
  dirs.reserve(groups.size() * k);
  wts.reserve(groups.size());
  for (const auto& [rep, w] : groups) {
    if (w < kPruneFraction * mass) continue;  // negligible mass
    auto d = dir_of(rep);
    dirs.insert(dirs.end(), d.begin(), d.end());
    wts.push_back(w);
  }
  directions_ = std::move(dirs);
  weights_ = std::move(wts);
}

double DiscreteSpectralMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

std::span<const double> DiscreteSpectralMeasure::direction(std::size_t j) const {
  const std::size_t k = static_cast<std::size_t>(dim_);
  return {directions_.data() + j * k, k};
}

DiscreteSpectralMeasure symmetrize(const DiscreteSpectralMeasure& measure) {
  const int k = measure.dim();
  const std::size_t n = measure.atom_count();
  std::vector<double> dirs;
  std::vector<double> wts;
  dirs.reserve(2 * n * static_cast<std::size_t>(k));
  wts.reserve(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    auto d = measure.direction(j);
    dirs.insert(dirs.end(), d.begin(), d.end());
    wts.push_back(0.5 * measure.weight(j));
    for (double c : d) dirs.push_back(-c);
    wts.push_back(0.5 * measure.weight(j));
  }
  return DiscreteSpectralMeasure(k, dirs, wts);
}

double multivariate_cf(const DiscreteSpectralMeasure& measure, double alpha,
                       std::span<const double> t) {
  StableParams{alpha, 1.0}.validate();
  if (static_cast<int>(t.size()) != measure.dim())
    throw error(errc::shape, "cf argument has dimension " + std::to_string(t.size()) +
                                 ", measure has " + std::to_string(measure.dim()));
  double expo = 0.0;
  const std::size_t k = t.size();
  for (std::size_t j = 0; j < measure.atom_count(); ++j) {
    auto s = measure.direction(j);
    double dot = 0.0;
    for (std::size_t i = 0; i < k; ++i) dot += t[i] * s[i];
    expo += measure.weight(j) * std::pow(std::fabs(dot), alpha);
  }
  return std::exp(-expo);
}

double marginal_scale(const DiscreteSpectralMeasure& measure, double alpha, int r) {
  StableParams{alpha, 1.0}.validate();
  if (r < 1 || r > measure.dim())
    throw error(errc::shape, "marginal index " + std::to_string(r) + " out of range [1, " +
                                 std::to_string(measure.dim()) + "]");
  double s = 0.0;
  for (std::size_t j = 0; j < measure.atom_count(); ++j)
    s += measure.weight(j) * std::pow(std::fabs(measure.direction(j)[static_cast<std::size_t>(r - 1)]), alpha);
  return s > 0.0 ? std::pow(s, 1.0 / alpha) : 0.0;
}

std::vector<double> sample_multivariate(const DiscreteSpectralMeasure& measure,
                                        double alpha, UniformStream& stream,
                                        std::size_t count) {
  StableParams unit{alpha, 1.0};
  unit.validate();
  const DiscreteSpectralMeasure sym = symmetrize(measure);
  const int k = sym.dim();
  const std::size_t n = sym.atom_count();
  std::vector<double> coef(n);  // w_j^(1/alpha)
  for (std::size_t j = 0; j < n; ++j) coef[j] = std::pow(sym.weight(j), 1.0 / alpha);
  std::vector<double> out(count * static_cast<std::size_t>(k), 0.0);
  for (std::size_t m = 0; m < count; ++m) {
    double* row = out.data() + m * static_cast<std::size_t>(k);
    for (std::size_t j = 0; j < n; ++j) {
      const double z = coef[j] * sample_stable_one(unit, stream);
      const double* s = sym.directions_flat().data() + j * static_cast<std::size_t>(k);
      for (int i = 0; i < k; ++i) row[i] += z * s[i];
    }
  }
  return out;
}

}  // namespace stable_limits
