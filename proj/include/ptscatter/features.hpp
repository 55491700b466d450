#pragma once

// Parameter sweeps, reflection/transmission zeros and spectral-singularity
// loci of the rhombic rings (plus numeric fallbacks for generic centres).

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "ptscatter/coefficients.hpp"
#include "ptscatter/rhombic.hpp"

namespace ptscatter {

enum class Axis { Flux, Gamma, K };

std::string_view to_string(Axis axis);
/// Accepts "phi"/"flux", "gamma", "k".
Axis parse_axis(std::string_view name);

/// Uniform grid lo..hi with `count` points; the last point equals hi exactly.
struct AxisRange {
    Axis axis = Axis::K;
    double lo = 0.0;
    double hi = 1.0;
    std::size_t count = 2;

    double at(std::size_t i) const;
};

inline constexpr double kBandInset = 1e-3;
inline constexpr std::size_t kDefaultResolution = 101;

AxisRange default_flux_axis(std::size_t count = kDefaultResolution);
AxisRange default_k_axis(std::size_t count = kDefaultResolution);

enum class SweepEngine { ClosedForm, Solver };

struct SweepOptions {
    SweepEngine engine = SweepEngine::ClosedForm;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned threads = 0;
};

struct SweepRow {
    double flux = 0.0;
    double gamma = 0.0;
    double k = 0.0;
    double r_left2 = 0.0;
    double r_right2 = 0.0;
    double t_left2 = 0.0;
    double t_right2 = 0.0;
    CoefficientFlags flags = CoefficientFlags::Ok;
};

/// Rows are row-major: the outer axis varies slowest. Centre-file sweeps
/// have a single k axis and report NaN for flux and gamma.
struct SweepTable {
    std::vector<AxisRange> axes;
    std::vector<SweepRow> rows;
};

/// Two-axis sweep of a rhombic ring; parameters not on an axis are taken
/// from `base`. Singular points are flagged per row, never thrown.
/// Throws DomainError for repeated axes, fewer than 2 points per axis or
/// k ranges outside (0, pi).
SweepTable sweep(const RhombicConfig& base, const AxisRange& outer, const AxisRange& inner,
                 const SweepOptions& options = {});

/// One-axis k sweep of a generic centre through the solver.
SweepTable sweep(const ScatteringCenter& center, const AxisRange& k_axis, const SweepOptions& options = {});

/// Header phi,gamma,k,rL2,rR2,tL2,tR2,flags; 12 significant digits.
void write_csv(const SweepTable& table, std::ostream& out);
void write_json(const SweepTable& table, std::ostream& out);

enum class FeatureKind {
    TransmissionZeroL,
    TransmissionZeroR,
    ReflectionZeroL,
    ReflectionZeroR,
    SpectralSingularity,
};

std::string_view to_string(FeatureKind kind);

struct FeaturePoint {
    double flux = 0.0;
    double gamma = 0.0;
    double k = 0.0;
    /// |coefficient|^2 from the solver for zeros, |denominator| for singularities.
    double check = 0.0;
    CoefficientFlags flags = CoefficientFlags::Ok;
};

struct FeatureLocus {
    FeatureKind kind = FeatureKind::TransmissionZeroL;
    std::vector<FeaturePoint> points;
    /// The channel's numerator vanishes for every k (no isolated zeros).
    bool vanishes_identically = false;
    /// The configuration cannot host this feature (reflection-PT ring has
    /// no spectral singularities); any points found would contradict it.
    bool empty_by_theorem = false;
};

inline constexpr double kZeroThreshold = 1e-16;
inline constexpr std::size_t kZeroScanResolution = 4001;

/// Left and right transmission zeros in k at fixed (flux, gamma). Roots of
/// the real numerator factor are bracketed and bisected; fluxes with
/// cos(Phi/2) or sin(Phi/2) below 1e-12 use the numeric fallback. Every
/// point satisfies |t|^2 < 1e-16 through the solver.
std::vector<FeatureLocus> find_transmission_zeros(const RhombicConfig& config);

/// Left and right reflection zeros, located and verified as above.
std::vector<FeatureLocus> find_reflection_zeros(const RhombicConfig& config);

/// Numeric fallback for any centre: grid minima of |coefficient| refined by
/// golden-section search, kept when |coefficient|^2 < 1e-16.
FeatureLocus find_zeros_numeric(const ScatteringCenter& center, Channel channel,
                                std::size_t resolution = kZeroScanResolution);

struct SingularityScan {
    /// A fixed value removes the parameter from the search.
    std::optional<double> flux;
    std::optional<double> gamma;
    std::optional<double> k;
    double flux_lo = 0.0, flux_hi = kTwoPi;
    double gamma_lo = -3.0, gamma_hi = 3.0;
    double k_lo = kBandInset, k_hi = kPi - kBandInset;
    std::size_t resolution = 51;
};

inline constexpr double kSingularityAccept = 1e-10;
inline constexpr double kTransferCrossCheck = 1e-8;

/// Zeros of the closed-form denominator over the free parameters, seeded
/// from grid minima of |D| and refined by damped Gauss-Newton. Removable
/// 0/0 points are discarded and each point is cross-checked against
/// |m22| < 1e-8 from the solver's transfer matrix.
FeatureLocus find_spectral_singularities(RingKind kind, const SingularityScan& scan);

} // namespace ptscatter
