#pragma once

// Four-site rhombic ring threaded by a synthetic flux, in its two
// PT-symmetric gain/loss arrangements, with closed-form coefficients.

#include <string>
#include <string_view>

#include "ptscatter/coefficients.hpp"
#include "ptscatter/lattice.hpp"

namespace ptscatter {

enum class RingKind { Axial, Reflection };

std::string_view to_string(RingKind kind);
/// Accepts "axial" or "reflection"; throws DomainError otherwise.
RingKind parse_ring_kind(std::string_view name);

/// Axial: -i gamma on A, +i gamma on B.
/// Reflection: +i gamma on -1, -i gamma on 1.
struct RhombicConfig {
    RingKind kind = RingKind::Axial;
    RingParameters params;
};

namespace ring_site {
inline const std::string left = "-1";
inline const std::string upper = "A";
inline const std::string right = "1";
inline const std::string lower = "B";
} // namespace ring_site

/// Ring -1 -> A -> 1 -> B -> -1 with links -e^{i Phi/4} so that the walk
/// encloses flux Phi.
ScatteringCenter build_axial(const RingParameters& p);
ScatteringCenter build_reflection(const RingParameters& p);
ScatteringCenter build(const RhombicConfig& config);

/// {-1, 1 fixed; A <-> B}.
ParityMap axial_parity();
/// {-1 <-> 1; A, B fixed}.
ParityMap reflection_parity();
ParityMap canonical_parity(RingKind kind);

/// The walk (-1, A, 1, B, -1).
std::vector<std::string> ring_cycle();

/// Closed-form coefficients of the axial ring.
/// Throws SpectralSingularity when |denominator| < 1e-10 with a nonzero
/// numerator; 0/0 points are limit-evaluated along k.
ScatteringCoefficients axial_coefficients(const RingParameters& p, const WaveVector& k);

/// Closed-form coefficients of the reflection ring. The removable point
/// k = pi/2, Phi = 2n pi returns its k-limit r = 0, t = cos(Phi/2).
ScatteringCoefficients reflection_coefficients(const RingParameters& p, const WaveVector& k);

/// Non-throwing closed-form evaluation used by sweeps; singular points come
/// back flagged NearSingular with whatever the formula yields.
ScatteringCoefficients closed_form(const RhombicConfig& config, const WaveVector& k);

/// Closed-form denominator and its partial derivatives.
struct DenominatorValue {
    cplx value;
    cplx d_flux;
    cplx d_gamma;
    cplx d_k;
};

DenominatorValue ring_denominator(RingKind kind, const RingParameters& p, double k);

/// Largest modulus among the four closed-form numerators.
double ring_numerator_scale(RingKind kind, const RingParameters& p, double k);

enum class Channel { ReflectionLeft, ReflectionRight, TransmissionLeft, TransmissionRight };

std::string_view to_string(Channel channel);

/// Real-valued factor of the coefficient numerator whose zeros are the
/// zeros of that coefficient for k in (0, pi).
double zero_numerator(RingKind kind, Channel channel, const RingParameters& p, double k);

} // namespace ptscatter
