#pragma once

#include <filesystem>
#include "json.hpp"

#include "hetsphere/harmonics.hpp"

namespace hetsphere {

/// Parses {"coefficients":[{"l":..,"m":..,"re":..,"im":..}, ...]}.
///
/// Malformed documents and duplicate (l, m) entries throw std::invalid_argument.
/// An l = 0 entry throws DensityError. Missing conjugate partners are filled
/// in only when the document carries "autocomplete_conjugates": true.
DensitySpec density_from_json(const nlohmann::json& doc);

DensitySpec load_density(const std::filesystem::path& path);

nlohmann::json density_to_json(const DensitySpec& d);

}  // namespace hetsphere
