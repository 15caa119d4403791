#include "stable_limits/serialize.hpp"

#include <json.hpp>

#include "stable_limits/errors.hpp"

namespace stable_limits {

using nlohmann::json;

std::string measure_to_json(const DiscreteSpectralMeasure& measure) {
  json atoms = json::array();
  for (std::size_t j = 0; j < measure.atom_count(); ++j) {
    auto d = measure.direction(j);
    atoms.push_back({{"s", std::vector<double>(d.begin(), d.end())}, {"w", measure.weight(j)}});
  }
  json out = {{"dim", measure.dim()}, {"atoms", atoms}};
  return out.dump();
}

DiscreteSpectralMeasure measure_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw error(errc::parse, std::string("measure JSON: ") + e.what());
  }
  try {
    const int dim = j.at("dim").get<int>();
    std::vector<double> dirs;
    std::vector<double> wts;
    for (const auto& atom : j.at("atoms")) {
      const auto s = atom.at("s").get<std::vector<double>>();
      if (static_cast<int>(s.size()) != dim)
        throw error(errc::shape, "measure JSON: atom direction length != dim");
      dirs.insert(dirs.end(), s.begin(), s.end());
      wts.push_back(atom.at("w").get<double>());
    }
    return DiscreteSpectralMeasure(dim, dirs, wts);
  } catch (const json::exception& e) {
    throw error(errc::parse, std::string("measure JSON: ") + e.what());
  }
}

std::string recursion_to_json(const RecursionResult& result) {
  json layers = json::array();
  for (int l = 1; l <= result.depth(); ++l) {
    if (result.multivariate) {
      layers.push_back(
          {{"l", l},
           {"measure", json::parse(measure_to_json(result.measures[static_cast<std::size_t>(l - 1)]))}});
    } else {
      layers.push_back({{"l", l}, {"sigma", result.sigmas[static_cast<std::size_t>(l - 1)]}});
    }
  }
  json out = {{"mode", result.multivariate ? "gamma" : "sigma"},
              {"alpha", result.alpha},
              {"M", result.mc_samples},
              {"seed", result.seed},
              {"kind", to_string(result.kind)},
              {"stderr", result.stderr_acc},
              {"layers", layers}};
  return out.dump(2);
}

}  // namespace stable_limits
