#ifndef STABLE_LIMITS_SERIALIZE_HPP
#define STABLE_LIMITS_SERIALIZE_HPP

#include <string>

#include "stable_limits/recursion.hpp"
#include "stable_limits/spectral.hpp"

namespace stable_limits {

// {"dim": k, "atoms": [{"s": [..k reals..], "w": real}, ...]}
std::string measure_to_json(const DiscreteSpectralMeasure& measure);
DiscreteSpectralMeasure measure_from_json(const std::string& text);

// {"mode": "sigma"|"gamma", "alpha": ., "M": ., "seed": ., "kind": .,
//  "stderr": [per-layer accumulated], "layers": [{"l": 1, "sigma": .} | {"l": 1, "measure": {...}}]}
std::string recursion_to_json(const RecursionResult& result);

}  // namespace stable_limits

#endif
