#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "ptscatter/lattice.hpp"

namespace ptscatter {

/// Centre definition document:
///
///   {
///     "sites":        ["-1", "A", "1", "B"],
///     "onsite":       {"A": [0.0, -0.5], "B": [0.0, 0.5]},
///     "hoppings":     [["1", "A", [-0.92, -0.38]], ...],
///     "attach_left":  "-1",
///     "attach_right": "1"
///   }
///
/// Complex numbers are [re, im] pairs. Each hopping triple gives
/// <from|H|to>; the reverse element is implied by Hermitian conjugation.
/// Doubles are written with round-trip precision.
nlohmann::json center_to_json(const ScatteringCenter& center);

/// Throws DomainError on schema violations. Invariants are not checked here;
/// call validate_center() for that.
ScatteringCenter center_from_json(const nlohmann::json& doc);

ScatteringCenter load_center(const std::filesystem::path& path);
void save_center(const ScatteringCenter& center, const std::filesystem::path& path);

} // namespace ptscatter
