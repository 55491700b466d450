#include "ptscatter/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <numeric>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "ptscatter/errors.hpp"
#include "ptscatter/solver.hpp"

namespace ptscatter {

std::string_view to_string(Axis axis) {
    switch (axis) {
    case Axis::Flux: return "phi";
    case Axis::Gamma: return "gamma";
    case Axis::K: return "k";
    }
    return "?";
}

Axis parse_axis(std::string_view name) {
    if (name == "phi" || name == "flux") return Axis::Flux;
    if (name == "gamma") return Axis::Gamma;
    if (name == "k") return Axis::K;
    throw DomainError("unknown axis '" + std::string(name) + "' (expected phi, gamma or k)");
}

double AxisRange::at(std::size_t i) const {
    if (i + 1 >= count) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

AxisRange default_flux_axis(std::size_t count) { return {Axis::Flux, 0.0, kTwoPi, count}; }

AxisRange default_k_axis(std::size_t count) { return {Axis::K, kBandInset, kPi - kBandInset, count}; }

namespace {

void check_axis(const AxisRange& a) {
    if (a.count < 2) throw DomainError("axis " + std::string(to_string(a.axis)) + " needs at least 2 points");
    if (!std::isfinite(a.lo) || !std::isfinite(a.hi)) {
        throw DomainError("axis " + std::string(to_string(a.axis)) + " has a non-finite bound");
    }
    if (a.axis == Axis::K && !(std::min(a.lo, a.hi) > 0.0 && std::max(a.lo, a.hi) < kPi)) {
        throw DomainError("k axis must lie inside the open band interval (0, pi)");
    }
}

unsigned worker_count(unsigned requested, std::size_t work) {
    unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work, 1)));
}

// Evaluates rows[i] = eval(i) on a pool of threads; each index is written once.
void parallel_rows(std::vector<SweepRow>& rows, unsigned threads, const std::function<SweepRow(std::size_t)>& eval) {
    const unsigned n = worker_count(threads, rows.size());
    if (n <= 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = eval(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(n);
    const std::size_t chunk = (rows.size() + n - 1) / n;
    for (unsigned w = 0; w < n; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(rows.size(), begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&rows, &eval, begin, end] {
            for (std::size_t i = begin; i < end; ++i) rows[i] = eval(i);
        });
    }
}

SweepRow to_row(double flux, double gamma, const ScatteringCoefficients& sc) {
    return {flux,
            gamma,
            sc.k,
            sc.reflectance_left(),
            sc.reflectance_right(),
            sc.transmittance_left(),
            sc.transmittance_right(),
            sc.flags};
}

void set_axis(RhombicConfig& config, double& k, Axis axis, double value) {
    switch (axis) {
    case Axis::Flux: config.params.flux = value; break;
    case Axis::Gamma: config.params.gamma = value; break;
    case Axis::K: k = value; break;
    }
}

} // namespace

SweepTable sweep(const RhombicConfig& base, const AxisRange& outer, const AxisRange& inner,
                 const SweepOptions& options) {
    check_axis(outer);
    check_axis(inner);
    if (outer.axis == inner.axis) throw DomainError("sweep axes must differ");
    if (outer.axis != Axis::K && inner.axis != Axis::K) {
        throw DomainError("one sweep axis must be k (the fixed k would otherwise be unspecified)");
    }

    SweepTable table;
    table.axes = {outer, inner};
    table.rows.resize(outer.count * inner.count);
    parallel_rows(table.rows, options.threads, [&](std::size_t idx) {
        RhombicConfig config = base;
        double k = 0.0;
        set_axis(config, k, outer.axis, outer.at(idx / inner.count));
        set_axis(config, k, inner.axis, inner.at(idx % inner.count));
        const WaveVector wk(k);
        const ScatteringCoefficients sc = options.engine == SweepEngine::ClosedForm
                                              ? closed_form(config, wk)
                                              : coefficients_with_limits(build(config), wk);
        return to_row(config.params.flux, config.params.gamma, sc);
    });
    return table;
}

SweepTable sweep(const ScatteringCenter& center, const AxisRange& k_axis, const SweepOptions& options) {
    check_axis(k_axis);
    if (k_axis.axis != Axis::K) throw DomainError("centre sweeps run over k only");
    require_valid(center);

    SweepTable table;
    table.axes = {k_axis};
    table.rows.resize(k_axis.count);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    parallel_rows(table.rows, options.threads, [&](std::size_t i) {
        return to_row(nan, nan, coefficients_with_limits(center, WaveVector(k_axis.at(i))));
    });
    return table;
}

void write_csv(const SweepTable& table, std::ostream& out) {
    out << "phi,gamma,k,rL2,rR2,tL2,tR2,flags\n";
    char buf[256];
    for (const SweepRow& r : table.rows) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,", r.flux, r.gamma, r.k, r.r_left2,
                      r.r_right2, r.t_left2, r.t_right2);
        out << buf << flags_to_string(r.flags) << '\n';
    }
}

void write_json(const SweepTable& table, std::ostream& out) {
    nlohmann::json doc;
    doc["axes"] = nlohmann::json::array();
    for (const AxisRange& a : table.axes) {
        doc["axes"].push_back({{"axis", to_string(a.axis)}, {"lo", a.lo}, {"hi", a.hi}, {"count", a.count}});
    }
    auto& rows = doc["rows"] = nlohmann::json::array();
    for (const SweepRow& r : table.rows) {
        rows.push_back({{"phi", r.flux},
                        {"gamma", r.gamma},
                        {"k", r.k},
                        {"rL2", r.r_left2},
                        {"rR2", r.r_right2},
                        {"tL2", r.t_left2},
                        {"tR2", r.t_right2},
                        {"flags", flags_to_string(r.flags)}});
    }
    out << doc.dump(1) << '\n';
}

std::string_view to_string(FeatureKind kind) {
    switch (kind) {
    case FeatureKind::TransmissionZeroL: return "TransmissionZeroL";
    case FeatureKind::TransmissionZeroR: return "TransmissionZeroR";
    case FeatureKind::ReflectionZeroL: return "ReflectionZeroL";
    case FeatureKind::ReflectionZeroR: return "ReflectionZeroR";
    case FeatureKind::SpectralSingularity: return "SpectralSingularity";
    }
    return "?";
}

namespace {

constexpr double kScanEdge = 1e-9;
constexpr double kDuplicateRoot = 1e-9;
constexpr double kDerivativeStep = 1e-6;

using RealFn = std::function<double(double)>;

double bisect(const RealFn& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = std::midpoint(lo, hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return std::midpoint(lo, hi);
}

double golden_minimum(const RealFn& f, double lo, double hi) {
    constexpr double ratio = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(b); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

std::vector<double> grid(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = AxisRange{Axis::K, lo, hi, n}.at(i);
    return out;
}

void push_unique(std::vector<double>& roots, double k) {
    for (double r : roots) {
        if (std::abs(r - k) < kDuplicateRoot) return;
    }
    roots.push_back(k);
}

struct RootScan {
    std::vector<double> roots;
    bool identically_zero = false;
};

// Simple roots by sign change; touching roots where the slope changes sign
// at a grid minimum of |f|.
RootScan real_roots(const RealFn& f, std::size_t n) {
    const std::vector<double> ks = grid(kScanEdge, kPi - kScanEdge, n);
    std::vector<double> vals(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        vals[i] = f(ks[i]);
        scale = std::max(scale, std::abs(vals[i]));
    }
    RootScan out;
    if (scale < 1e-14) {
        out.identically_zero = true;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (vals[i] == 0.0) push_unique(out.roots, ks[i]);
        if (i + 1 < n && vals[i] != 0.0 && vals[i + 1] != 0.0 && (vals[i] < 0.0) != (vals[i + 1] < 0.0)) {
            push_unique(out.roots, bisect(f, ks[i], ks[i + 1]));
        }
    }
    const RealFn slope = [&f](double k) { return f(k + kDerivativeStep) - f(k - kDerivativeStep); };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double a = std::abs(vals[i]);
        if (a > std::abs(vals[i - 1]) || a > std::abs(vals[i + 1])) continue;
        if ((vals[i - 1] < 0.0) != (vals[i + 1] < 0.0)) continue; // simple root, handled above
        const double lo = ks[i - 1], hi = ks[i + 1];
        double k0;
        if ((slope(lo) < 0.0) != (slope(hi) < 0.0)) {
            k0 = bisect(slope, lo, hi);
        } else {
            k0 = golden_minimum([&f](double k) { return std::abs(f(k)); }, lo, hi);
        }
        if (std::abs(f(k0)) < 1e-12 * std::max(1.0, scale)) push_unique(out.roots, k0);
    }
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

cplx channel_value(const ScatteringCoefficients& sc, Channel channel) {
    switch (channel) {
    case Channel::ReflectionLeft: return sc.r_left;
    case Channel::ReflectionRight: return sc.r_right;
    case Channel::TransmissionLeft: return sc.t_left;
    case Channel::TransmissionRight: return sc.t_right;
    }
    return {};
}

FeatureKind feature_of(Channel channel) {
    switch (channel) {
    case Channel::ReflectionLeft: return FeatureKind::ReflectionZeroL;
    case Channel::ReflectionRight: return FeatureKind::ReflectionZeroR;
    case Channel::TransmissionLeft: return FeatureKind::TransmissionZeroL;
    case Channel::TransmissionRight: return FeatureKind::TransmissionZeroR;
    }
    return FeatureKind::TransmissionZeroL;
}

std::optional<FeaturePoint> verified_zero(const ScatteringCenter& center, Channel channel, double k) {
    if (!(k > 0.0 && k < kPi)) return std::nullopt;
    ScatteringCoefficients sc;
    try {
        sc = coefficients_with_limits(center, WaveVector(k));
    } catch (const Error&) {
        return std::nullopt;
    }
    const double value = std::norm(channel_value(sc, channel));
    if (!(value < kZeroThreshold)) return std::nullopt;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return FeaturePoint{nan, nan, k, value, sc.flags};
}

FeatureLocus analytic_zeros(const RhombicConfig& config, Channel channel) {
    FeatureLocus locus;
    locus.kind = feature_of(channel);
    const RealFn numerator = [&](double k) { return zero_numerator(config.kind, channel, config.params, k); };
    const RootScan scan = real_roots(numerator, kZeroScanResolution);
    locus.vanishes_identically = scan.identically_zero;
    const ScatteringCenter center = build(config);
    for (double k : scan.roots) {
        if (auto p = verified_zero(center, channel, k)) {
            p->flux = config.params.flux;
            p->gamma = config.params.gamma;
            locus.points.push_back(*p);
        }
    }
    return locus;
}

FeatureLocus fallback_zeros(const RhombicConfig& config, Channel channel) {
    FeatureLocus locus = find_zeros_numeric(build(config), channel);
    for (auto& p : locus.points) {
        p.flux = config.params.flux;
        p.gamma = config.params.gamma;
    }
    return locus;
}

} // namespace

std::vector<FeatureLocus> find_transmission_zeros(const RhombicConfig& config) {
    const double cp = std::cos(0.5 * config.params.flux);
    const double sp = std::sin(0.5 * config.params.flux);
    const bool analytic = std::abs(cp) >= 1e-12 && std::abs(sp) >= 1e-12;
    std::vector<FeatureLocus> out;
    for (Channel c : {Channel::TransmissionLeft, Channel::TransmissionRight}) {
        out.push_back(analytic ? analytic_zeros(config, c) : fallback_zeros(config, c));
    }
    return out;
}

std::vector<FeatureLocus> find_reflection_zeros(const RhombicConfig& config) {
    return {analytic_zeros(config, Channel::ReflectionLeft), analytic_zeros(config, Channel::ReflectionRight)};
}

FeatureLocus find_zeros_numeric(const ScatteringCenter& center, Channel channel, std::size_t resolution) {
    require_valid(center);
    if (resolution < 3) throw DomainError("zero scan needs at least 3 grid points");
    FeatureLocus locus;
    locus.kind = feature_of(channel);

    const RealFn modulus = [&](double k) {
        return std::abs(channel_value(coefficients_with_limits(center, WaveVector(k)), channel));
    };
    const std::vector<double> ks = grid(kScanEdge, kPi - kScanEdge, resolution);
    std::vector<double> vals(resolution);
    std::size_t tiny = 0;
    for (std::size_t i = 0; i < resolution; ++i) {
        vals[i] = modulus(ks[i]);
        if (vals[i] * vals[i] < kZeroThreshold) ++tiny;
    }
    if (2 * tiny > resolution) {
        locus.vanishes_identically = true;
        return locus;
    }

    std::vector<double> roots;
    for (std::size_t i = 1; i + 1 < resolution; ++i) {
        if (vals[i] > vals[i - 1] || vals[i] > vals[i + 1]) continue;
        push_unique(roots, golden_minimum(modulus, ks[i - 1], ks[i + 1]));
    }
    std::sort(roots.begin(), roots.end());
    for (double k : roots) {
        if (auto p = verified_zero(center, channel, k)) locus.points.push_back(*p);
    }
    return locus;
}

namespace {

constexpr double kRemovableNumerator = 1e-8;
constexpr double kDuplicatePoint = 1e-7;
constexpr double kBoxSlack = 1e-9;

struct FreeParameter {
    Axis axis;
    double lo, hi;
};

struct ParameterPoint {
    double flux, gamma, k;

    double& operator[](Axis a) { return a == Axis::Flux ? flux : (a == Axis::Gamma ? gamma : k); }
    double operator[](Axis a) const { return a == Axis::Flux ? flux : (a == Axis::Gamma ? gamma : k); }
};

DenominatorValue denominator_at(RingKind kind, const ParameterPoint& x) {
    return ring_denominator(kind, {x.flux, x.gamma}, x.k);
}

cplx derivative(const DenominatorValue& d, Axis a) {
    return a == Axis::Flux ? d.d_flux : (a == Axis::Gamma ? d.d_gamma : d.d_k);
}

bool inside(const ParameterPoint& x, const std::vector<FreeParameter>& free) {
    for (const auto& f : free) {
        if (x[f.axis] < f.lo - kBoxSlack || x[f.axis] > f.hi + kBoxSlack) return false;
    }
    return x.k > 0.0 && x.k < kPi;
}

// Damped Gauss-Newton on (Re D, Im D) using the minimum-norm step.
std::optional<ParameterPoint> refine(RingKind kind, ParameterPoint x, const std::vector<FreeParameter>& free) {
    const auto m = static_cast<Eigen::Index>(free.size());
    DenominatorValue d = denominator_at(kind, x);
    for (int it = 0; it < 100 && std::abs(d.value) > 1e-15; ++it) {
        Eigen::Matrix<double, 2, Eigen::Dynamic> jac(2, m);
        for (Eigen::Index j = 0; j < m; ++j) {
            const cplx dj = derivative(d, free[static_cast<std::size_t>(j)].axis);
            jac(0, j) = dj.real();
            jac(1, j) = dj.imag();
        }
        const Eigen::Vector2d rhs(-d.value.real(), -d.value.imag());
        const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(rhs);
        if (!step.allFinite()) return std::nullopt;

        double scale = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
            ParameterPoint trial = x;
            for (Eigen::Index j = 0; j < m; ++j) trial[free[static_cast<std::size_t>(j)].axis] += scale * step(j);
            if (!(trial.k > 0.0 && trial.k < kPi)) continue;
            const DenominatorValue dt = denominator_at(kind, trial);
            if (std::abs(dt.value) < std::abs(d.value)) {
                x = trial;
                d = dt;
                improved = true;
                break;
            }
        }
        if (!improved || scale * step.norm() < 1e-16) break;
    }
    if (!inside(x, free)) return std::nullopt;
    return x;
}

std::vector<ParameterPoint> grid_seeds(RingKind kind, const ParameterPoint& fixed,
                                       const std::vector<FreeParameter>& free, std::size_t n) {
    const std::size_t m = free.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < m; ++i) total *= n;

    auto point_of = [&](std::size_t flat) {
        ParameterPoint x = fixed;
        for (std::size_t j = 0; j < m; ++j) {
            x[free[j].axis] = AxisRange{free[j].axis, free[j].lo, free[j].hi, n}.at(flat % n);
            flat /= n;
        }
        return x;
    };
    std::vector<double> mag(total);
    for (std::size_t flat = 0; flat < total; ++flat) mag[flat] = std::abs(denominator_at(kind, point_of(flat)).value);

    std::vector<ParameterPoint> seeds;
    for (std::size_t flat = 0; flat < total; ++flat) {
        bool minimum = true;
        std::size_t stride = 1;
        std::size_t rest = flat;
        for (std::size_t j = 0; j < m && minimum; ++j) {
            const std::size_t idx = rest % n;
            rest /= n;
            if (idx > 0 && mag[flat - stride] < mag[flat]) minimum = false;
            if (idx + 1 < n && mag[flat + stride] < mag[flat]) minimum = false;
            stride *= n;
        }
        if (minimum) seeds.push_back(point_of(flat));
    }
    return seeds;
}

} // namespace

FeatureLocus find_spectral_singularities(RingKind kind, const SingularityScan& scan) {
    if (scan.resolution < 2) throw DomainError("singularity scan needs at least 2 points per axis");
    if (scan.k && !(*scan.k > 0.0 && *scan.k < kPi)) throw DomainError("fixed k must lie in (0, pi)");
    if (!(scan.k_lo > 0.0 && scan.k_hi < kPi && scan.k_lo < scan.k_hi)) {
        throw DomainError("k scan range must lie inside (0, pi)");
    }

    FeatureLocus locus;
    locus.kind = FeatureKind::SpectralSingularity;
    locus.empty_by_theorem = kind == RingKind::Reflection;

    ParameterPoint fixed{scan.flux.value_or(0.0), scan.gamma.value_or(0.0), scan.k.value_or(0.5 * kPi)};
    std::vector<FreeParameter> free;
    if (!scan.flux) free.push_back({Axis::Flux, scan.flux_lo, scan.flux_hi});
    if (!scan.gamma) free.push_back({Axis::Gamma, scan.gamma_lo, scan.gamma_hi});
    if (!scan.k) free.push_back({Axis::K, scan.k_lo, scan.k_hi});

    std::vector<ParameterPoint> candidates;
    if (free.empty()) {
        candidates.push_back(fixed);
    } else {
        for (const auto& seed : grid_seeds(kind, fixed, free, scan.resolution)) {
            if (auto x = refine(kind, seed, free)) candidates.push_back(*x);
        }
    }

    for (const ParameterPoint& x : candidates) {
        const RingParameters p{x.flux, x.gamma};
        const double dmag = std::abs(ring_denominator(kind, p, x.k).value);
        if (!(dmag < kSingularityAccept)) continue;
        if (ring_numerator_scale(kind, p, x.k) < kRemovableNumerator) continue;
        try {
            const TransferMatrix m = direct_transfer_matrix(build({kind, p}), WaveVector(x.k));
            if (!(std::abs(m.m22) < kTransferCrossCheck)) continue;
        } catch (const Error&) {
            continue;
        }
        const bool duplicate = std::any_of(locus.points.begin(), locus.points.end(), [&](const FeaturePoint& q) {
            return std::abs(q.flux - x.flux) < kDuplicatePoint && std::abs(q.gamma - x.gamma) < kDuplicatePoint &&
                   std::abs(q.k - x.k) < kDuplicatePoint;
        });
        if (!duplicate) locus.points.push_back({x.flux, x.gamma, x.k, dmag, CoefficientFlags::NearSingular});
    }
    std::sort(locus.points.begin(), locus.points.end(), [](const FeaturePoint& a, const FeaturePoint& b) {
        return std::tie(a.flux, a.gamma, a.k) < std::tie(b.flux, b.gamma, b.k);
    });
    return locus;
}

} // namespace ptscatter
