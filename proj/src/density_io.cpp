#include "hetsphere/density_io.hpp"

#include <fstream>
#include <stdexcept>

namespace hetsphere {

DensitySpec density_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("coefficients") || !doc["coefficients"].is_array()) {
    throw std::invalid_argument("density document must be an object with a \"coefficients\" array");
  }
  DensitySpec::Coefficients coefficients;
  for (const auto& entry : doc["coefficients"]) {
    if (!entry.is_object() || !entry.contains("l") || !entry.contains("m")) {
      throw std::invalid_argument("density entry needs integer \"l\" and \"m\"");
    }
    if (!entry["l"].is_number_integer() || !entry["m"].is_number_integer()) {
      throw std::invalid_argument("density entry \"l\" and \"m\" must be integers");
    }
    const int l = entry["l"].get<int>();
    const int m = entry["m"].get<int>();
    const double re = entry.value("re", 0.0);
    const double im = entry.value("im", 0.0);
    if (l < 0 || std::abs(m) > l) {
      throw std::invalid_argument("invalid harmonic index (l=" + std::to_string(l) +
                                  ", m=" + std::to_string(m) + ")");
    }
    if (!coefficients.emplace(HarmonicIndex(l, m), complex(re, im)).second) {
      throw std::invalid_argument("duplicate density entry (l=" + std::to_string(l) +
                                  ", m=" + std::to_string(m) + ")");
    }
  }
  DensitySpec d(std::move(coefficients));
  const auto flag = doc.find("autocomplete_conjugates");
  if (flag != doc.end() && flag->is_boolean() && flag->get<bool>()) {
    d = d.with_conjugates_completed();
  }
  return d;
}

DensitySpec load_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open density file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("density file " + path.string() + ": " + e.what());
  }
  return density_from_json(doc);
}

nlohmann::json density_to_json(const DensitySpec& d) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [idx, c] : d.coefficients()) {
    entries.push_back({{"l", idx.l}, {"m", idx.m}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"coefficients", entries}};
}

}  // namespace hetsphere
