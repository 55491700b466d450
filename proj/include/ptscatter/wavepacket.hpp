#pragma once

// Time-domain oracle: a Gaussian packet on a finite chain that embeds the
// centre, integrated with classical RK4. Final norms on either side of the
// centre estimate |r|^2 and |t|^2.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptscatter/coefficients.hpp"
#include "ptscatter/lattice.hpp"
#include "ptscatter/solver.hpp"

namespace ptscatter {

struct WavepacketSpec {
    double k0 = kPi / 2;
    double sigma = 15.0;
    /// Launch position; negative for left incidence (mirrored for Right).
    double x0 = -200.0;
    /// Lead sites run from -N to -2 and from 2 to N.
    int half_length = 400;
    double horizon = 0.0;
    double dt = 0.02;
    /// Trace sample every `trace_stride` steps (and at the final step).
    std::size_t trace_stride = 50;

    /// x0 = -N/2 and horizon (N + sigma) / v_g, with v_g = 2 sin k0.
    static WavepacketSpec standard(double k0, double sigma = 15.0, int half_length = 400);

    /// Throws DomainError unless sigma >= 5, N >= 10 sigma, |x0| > 3 sigma,
    /// x0 inside the chain, horizon > 0 and 0 < dt <= 0.02.
    void validate() const;
};

struct NormSample {
    double time = 0.0;
    double norm = 0.0;
    double reflected = 0.0;   ///< norm on the incidence side beyond 3 sigma
    double transmitted = 0.0; ///< norm on the far side beyond 3 sigma
    /// 2 sum Im(V_s) |psi_s|^2, the instantaneous d(norm)/dt.
    double gain_rate = 0.0;
};

struct WavepacketResult {
    double reflectance = 0.0;
    double transmittance = 0.0;
    std::vector<NormSample> trace;
};

/// Throws HorizonError when more than 1e-6 of the norm reaches the five
/// outermost sites at either end.
WavepacketResult evolve(const ScatteringCenter& center, const WavepacketSpec& spec, Side side = Side::Left);

/// CSV columns t,norm,R_region,T_region.
void write_trace_csv(const WavepacketResult& result, std::ostream& out);

inline constexpr double kDefaultOracleTolerance = 0.02;

struct ComparisonReport {
    bool passed = false;
    double tolerance = kDefaultOracleTolerance;
    bool widened = false;
    double reflectance_error = 0.0;
    double transmittance_error = 0.0;
    std::string note;
};

/// Pass iff both probabilities agree within the tolerance. `bandwidth`
/// holds coefficients sampled across the packet's k-spread; the tolerance
/// widens by their largest deviation from `sc` when that exceeds it, and
/// also when `sc` is flagged near-singular.
ComparisonReport compare(const WavepacketResult& oracle, const ScatteringCoefficients& sc, Side side,
                         double tolerance = kDefaultOracleTolerance,
                         std::span<const ScatteringCoefficients> bandwidth = {});

} // namespace ptscatter
