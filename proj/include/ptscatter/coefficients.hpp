#pragma once

#include <cstdint>
#include <string>

#include "ptscatter/lattice.hpp"

namespace ptscatter {

enum class CoefficientFlags : std::uint8_t {
    Ok = 0,
    LimitEvaluated = 1 << 0,
    NearSingular = 1 << 1,
};

constexpr CoefficientFlags operator|(CoefficientFlags a, CoefficientFlags b) {
    return static_cast<CoefficientFlags>(static_cast<std::uint8_t>(a) | static_cast<std::uint8_t>(b));
}

constexpr bool has_flag(CoefficientFlags set, CoefficientFlags f) {
    return (static_cast<std::uint8_t>(set) & static_cast<std::uint8_t>(f)) != 0;
}

/// "ok", "limit", "near_singular" or "limit|near_singular".
std::string flags_to_string(CoefficientFlags flags);

/// Reflection/transmission amplitudes for left and right incidence at one k.
///
/// Left incidence:  psi(j<0) = e^{ikj} + r_L e^{-ikj},  psi(j>0) = t_L e^{ikj}.
/// Right incidence: psi(j<0) = t_R e^{-ikj},  psi(j>0) = e^{-ikj} + r_R e^{ikj}.
struct ScatteringCoefficients {
    cplx r_left;
    cplx t_left;
    cplx r_right;
    cplx t_right;
    double k = 0.0;
    CoefficientFlags flags = CoefficientFlags::Ok;

    double reflectance_left() const { return std::norm(r_left); }
    double transmittance_left() const { return std::norm(t_left); }
    double reflectance_right() const { return std::norm(r_right); }
    double transmittance_right() const { return std::norm(t_right); }

    /// Largest entrywise modulus of the difference of the four amplitudes.
    double max_difference(const ScatteringCoefficients& other) const;
};

} // namespace ptscatter
