#pragma once

// Parity, time-reversal and PT classification of a centre, and the
// reciprocity relations PT symmetry imposes on scattering coefficients.

#include <string_view>
#include <utility>
#include <vector>

#include "ptscatter/coefficients.hpp"
#include "ptscatter/lattice.hpp"

namespace ptscatter {

enum class PtKind { AxialPT, ReflectionPT, PSymmetric, TSymmetric, None };

std::string_view to_string(PtKind kind);

inline constexpr double kSymmetryTolerance = 1e-12;

struct PtClassification {
    PtKind kind = PtKind::None;
    ParityMap parity;
    /// Residual of the symmetry that decided `kind` (PT residual for None).
    double residual = 0.0;
    double pt_residual = 0.0; ///< max |P H* P - H|
    double p_residual = 0.0;  ///< max |P H P - H|
    double t_residual = 0.0;  ///< max |H* - H|
};

/// T is complex conjugation in the site basis. PT symmetry counts as axial
/// when the parity fixes both attachment sites and as reflection when it
/// swaps them; a PT-symmetric centre whose parity moves an attachment site
/// elsewhere falls through to the plain P / T checks. Plain P only counts
/// for non-identity parities compatible with the leads.
/// Throws DomainError if `parity` does not cover exactly the centre sites.
PtClassification classify_pt(const ScatteringCenter& center, const ParityMap& parity);

/// Every lead-compatible involution (attachments fixed or swapped) under
/// which the centre is PT symmetric. Throws SizeLimit above 10 sites.
std::vector<std::pair<ParityMap, PtClassification>> find_parity_maps(const ScatteringCenter& center);

/// Every lead-compatible involution, symmetric or not. Throws SizeLimit
/// above 10 sites.
std::vector<ParityMap> lead_compatible_involutions(const ScatteringCenter& center);

struct RelationResiduals {
    double first = 0.0;
    double second = 0.0;
    double aux_first = 0.0;
    double aux_second = 0.0;

    double max() const;
};

/// Axial PT:
///   |r_L|^2 + t_R t_L* - 1,   |r_R|^2 + t_L t_R* - 1,
///   r_L* t_L + r_R t_L*,      r_R* t_R + r_L t_R*.
RelationResiduals verify_axial_relations(const ScatteringCoefficients& sc);

/// Reflection PT:
///   |t_L|^2 + r_R r_L* - 1,   |t_R|^2 + r_L r_R* - 1,
///   r_L t_L* + r_L* t_R,      r_R t_R* + r_R* t_L.
RelationResiduals verify_reflection_relations(const ScatteringCoefficients& sc);

} // namespace ptscatter
