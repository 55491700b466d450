#pragma once

// Domain types shared by every module: scattering centres, lead model,
// wave vectors, ring parameters and parity maps.

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ptscatter {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// One hopping stored per unordered pair. `amplitude` is the matrix element
/// <from|H|to>; the reverse element is its complex conjugate.
struct Hopping {
    std::string from;
    std::string to;
    cplx amplitude;

    bool operator==(const Hopping&) const = default;
};

/// Finite tight-binding graph attached to two semi-infinite leads.
///
/// The attachment sites play the role of lead coordinates j = -1 (left)
/// and j = +1 (right); lead sites j <= -2 and j >= 2 couple to them with
/// hopping -1. Sites missing from `onsite` carry zero potential.
struct ScatteringCenter {
    std::vector<std::string> sites;
    std::map<std::string, cplx> onsite;
    std::vector<Hopping> hoppings;
    std::string attach_left;
    std::string attach_right;

    bool operator==(const ScatteringCenter&) const = default;

    std::size_t size() const noexcept { return sites.size(); }

    /// Position of `label` in `sites`; throws DomainError when absent.
    std::size_t index_of(std::string_view label) const;

    cplx potential(const std::string& label) const;
};

/// Semi-infinite uniform leads. The hopping fixes the energy unit.
struct LeadModel {
    static constexpr double hopping = 1.0;
};

/// Lead wave vector restricted to the open band interior (0, pi).
class WaveVector {
public:
    /// Throws DomainError unless 0 < k < pi.
    explicit WaveVector(double k);

    double value() const noexcept { return k_; }
    double group_velocity() const;
    cplx bloch() const { return std::polar(1.0, k_); }

private:
    double k_;
};

/// Flux and gain/loss of a rhombic ring.
struct RingParameters {
    double flux = 0.0;
    double gamma = 0.0;

    /// Peierls phase on each of the four links.
    double link_phase() const noexcept { return flux / 4.0; }
    /// Flux reduced to [0, 2pi).
    double canonical_flux() const;
};

/// Reduces an angle to [0, 2pi).
double wrap_phase(double angle);

/// Involutive permutation of centre sites.
class ParityMap {
public:
    ParityMap() = default;

    /// Builds the map from a list of swapped pairs; unlisted sites are fixed.
    /// Throws DomainError if a site appears twice.
    static ParityMap from_swaps(const std::vector<std::string>& sites,
                                const std::vector<std::pair<std::string, std::string>>& swaps);

    /// Throws DomainError unless `mapping` is an involution on its keys.
    explicit ParityMap(std::map<std::string, std::string> mapping);

    const std::string& image(const std::string& site) const;
    const std::map<std::string, std::string>& mapping() const noexcept { return mapping_; }
    bool is_identity() const;

    bool operator==(const ParityMap&) const = default;

private:
    std::map<std::string, std::string> mapping_;
};

/// Lead dispersion E_k = -2 cos k. Throws DomainError outside (0, pi).
double dispersion(double k);
double dispersion(const WaveVector& k);

enum class DiagnosticKind {
    DuplicateAttachment,
    UnknownSite,
    DuplicateSite,
    SelfLoop,
    DuplicateEdge,
    InvalidHopping,
    InvalidOnsite,
};

struct Diagnostic {
    DiagnosticKind kind;
    std::string message;
};

std::string_view to_string(DiagnosticKind kind);

/// One diagnostic per violated invariant; empty iff the centre is well formed.
std::vector<Diagnostic> validate_center(const ScatteringCenter& center);

/// Throws DomainError carrying every diagnostic if the centre is invalid.
void require_valid(const ScatteringCenter& center);

/// Local U(1) gauge transformation psi_a -> e^{i theta_a} psi_a.
/// Attachment sites must not carry a phase (the lead matching would change).
ScatteringCenter apply_gauge(const ScatteringCenter& center,
                             const std::map<std::string, double>& phases);

/// Peierls phase accumulated along a closed walk, in [0, 2pi).
///
/// A step a -> b contributes arg(-<b|H|a>), the phase relative to the
/// uniform -1 hopping of the leads. Throws DomainError if the walk is not
/// closed or uses a missing edge.
double cycle_flux(const ScatteringCenter& center, std::span<const std::string> cycle);

/// Centre Hamiltonian in the order of `center.sites`.
Eigen::MatrixXcd hamiltonian_matrix(const ScatteringCenter& center);

} // namespace ptscatter
