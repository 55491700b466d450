#pragma once

// Generic two-lead scattering solver for any ScatteringCenter.
//
// Lead amplitudes are plane waves f_j = a z^j + b z^-j (j < 0) and
// f_j = c z^j + d z^-j (j > 0) with z = e^{ik}; the attachment sites sit at
// j = -1 and j = +1. One linear equation per centre site (H psi = E_k psi)
// closes the system; its size is the number of centre sites.

#include <map>
#include <string>

#include "ptscatter/coefficients.hpp"
#include "ptscatter/lattice.hpp"

namespace ptscatter {

enum class Side { Left, Right };

/// Forward evaluates at z = e^{ik}. Reversed substitutes z -> e^{-ik} in the
/// assembled system, which is the analytic continuation k -> -k.
enum class Continuation { Forward, Reversed };

struct ScatteringState {
    /// Amplitude on every centre site, attachment sites included.
    std::map<std::string, cplx> internal;
    cplx left_plus;   ///< coefficient of e^{+ikj} for j < 0
    cplx left_minus;  ///< coefficient of e^{-ikj} for j < 0
    cplx right_plus;  ///< coefficient of e^{+ikj} for j > 0
    cplx right_minus; ///< coefficient of e^{-ikj} for j > 0
    Continuation continuation = Continuation::Forward;
};

struct SideSolution {
    cplx reflection;
    cplx transmission;
    ScatteringState state;
    double condition = 1.0;
    double residual = 0.0;
    CoefficientFlags flags = CoefficientFlags::Ok;
};

inline constexpr double kConditionLimit = 1e12;

/// Solves one incidence side.
///
/// Throws DomainError for invalid centres and DegeneratePoint when the system
/// is rank deficient but consistent (a bound state in the continuum makes the
/// internal amplitudes ambiguous). An inconsistent ill-conditioned system
/// (spectral singularity) returns a result flagged NearSingular.
SideSolution solve_scattering(const ScatteringCenter& center, const WaveVector& k, Side side,
                              Continuation continuation = Continuation::Forward);

/// Left and right incidence combined. Errors propagate from solve_scattering.
ScatteringCoefficients full_coefficients(const ScatteringCenter& center, const WaveVector& k,
                                         Continuation continuation = Continuation::Forward);

/// As full_coefficients, but DegeneratePoint is resolved by two-sided
/// Richardson extrapolation from k +- 1e-6 and flagged LimitEvaluated.
ScatteringCoefficients coefficients_with_limits(const ScatteringCenter& center, const WaveVector& k);

/// Maps left-lead amplitudes (left_plus, left_minus) to right-lead amplitudes
/// (right_plus, right_minus).
struct TransferMatrix {
    cplx m11, m12, m21, m22;

    cplx determinant() const { return m11 * m22 - m12 * m21; }
};

/// Built from coefficients; throws NotInvertible when t_R vanishes.
TransferMatrix transfer_matrix(const ScatteringCoefficients& sc);

/// Inverse of transfer_matrix(); throws SpectralSingularity when m22 = 0.
ScatteringCoefficients coefficients_from_transfer(const TransferMatrix& m, double k);

/// Transfer matrix solved directly from the centre with the left amplitudes
/// prescribed. Stays finite at spectral singularities, where m22 -> 0.
TransferMatrix direct_transfer_matrix(const ScatteringCenter& center, const WaveVector& k);

/// Max |(H psi - E_k psi)| over the centre sites and the two lead sites
/// adjacent to the attachments.
double residual(const ScatteringCenter& center, const WaveVector& k, const ScatteringState& state);

enum class SingularBranch { Emission, Absorption };

struct SingularState {
    ScatteringState state;
    double residual = 0.0;
    /// +1 for the upper sign of f(j>0) = -+i e^{ikj} (emission) or
    /// +-i e^{-ikj} (absorption), -1 for the lower sign, 0 when neither
    /// signed form fits and the raw null vector was used.
    int sign = 0;
};

/// Self-sustained emission (outgoing waves only) or reflectionless
/// absorption (incoming waves only). Throws DomainError unless (center, k)
/// is a spectral singularity to within 1e-8.
SingularState singular_state(const ScatteringCenter& center, const WaveVector& k, SingularBranch branch);

/// Smallest singular value over the largest of the outgoing-only system;
/// zero exactly at a spectral singularity.
double singularity_measure(const ScatteringCenter& center, const WaveVector& k);

} // namespace ptscatter
