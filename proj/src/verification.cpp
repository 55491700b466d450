#include "ptscatter/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "ptscatter/pt_symmetry.hpp"
#include "ptscatter/errors.hpp"
#include "ptscatter/solver.hpp"

namespace ptscatter {

std::vector<SamplePoint> sample_points(std::size_t count, std::uint64_t seed, const SampleDomain& domain) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> flux(domain.flux_lo, domain.flux_hi);
    std::uniform_real_distribution<double> gamma(domain.gamma_lo, domain.gamma_hi);
    std::uniform_real_distribution<double> k(domain.k_lo, domain.k_hi);
    std::vector<SamplePoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SamplePoint p;
        p.params.flux = flux(rng);
        p.params.gamma = gamma(rng);
        p.k = k(rng);
        out.push_back(p);
    }
    return out;
}

bool excluded(RingKind kind, const SamplePoint& point) {
    const ScatteringCoefficients sc = closed_form({kind, point.params}, WaveVector(point.k));
    if (sc.flags != CoefficientFlags::Ok) return true;
    const double largest = std::max({std::abs(sc.r_left), std::abs(sc.t_left), std::abs(sc.r_right),
                                     std::abs(sc.t_right)});
    return !(largest <= kExclusionModulus);
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
}

std::optional<std::string> VerificationReport::first_failure() const {
    for (const auto& c : checks) {
        if (!c.passed()) return c.name;
    }
    return std::nullopt;
}

namespace {

using Metric = std::function<double(const ScatteringCoefficients& analytic, const ScatteringCoefficients& numeric)>;

struct NamedMetric {
    std::string name;
    Metric metric;
};

std::vector<NamedMetric> metrics_for(RingKind kind) {
    std::vector<NamedMetric> m;
    if (kind == RingKind::Axial) {
        m.push_back({"axial PT relation |r_L|^2 + t_R t_L* = 1",
                     [](const auto& a, const auto&) { return verify_axial_relations(a).first; }});
        m.push_back({"axial PT relation |r_R|^2 + t_L t_R* = 1",
                     [](const auto& a, const auto&) { return verify_axial_relations(a).second; }});
        m.push_back({"axial PT relation r_L* t_L + r_R t_L* = 0",
                     [](const auto& a, const auto&) { return verify_axial_relations(a).aux_first; }});
        m.push_back({"axial PT relation r_R* t_R + r_L t_R* = 0",
                     [](const auto& a, const auto&) { return verify_axial_relations(a).aux_second; }});
        m.push_back({"reciprocal reflection |r_L|^2 = |r_R|^2", [](const auto& a, const auto&) {
                         return std::abs(a.reflectance_left() - a.reflectance_right());
                     }});
    } else {
        m.push_back({"reflection PT relation |t_L|^2 + r_R r_L* = 1",
                     [](const auto& a, const auto&) { return verify_reflection_relations(a).first; }});
        m.push_back({"reflection PT relation |t_R|^2 + r_L r_R* = 1",
                     [](const auto& a, const auto&) { return verify_reflection_relations(a).second; }});
        m.push_back({"reflection PT relation r_L t_L* + r_L* t_R = 0",
                     [](const auto& a, const auto&) { return verify_reflection_relations(a).aux_first; }});
        m.push_back({"reflection PT relation r_R t_R* + r_R* t_L = 0",
                     [](const auto& a, const auto&) { return verify_reflection_relations(a).aux_second; }});
        m.push_back({"reciprocal transmission |t_L|^2 = |t_R|^2", [](const auto& a, const auto&) {
                         return std::abs(a.transmittance_left() - a.transmittance_right());
                     }});
    }
    return m;
}

} // namespace

VerificationReport verify_relations(RingKind kind, std::size_t samples, std::uint64_t seed, double tolerance) {
    VerificationReport report;
    report.kind = kind;
    report.requested = samples;
    auto metrics = metrics_for(kind);
    metrics.push_back({"solver PT relations", [kind](const auto&, const auto& n) {
                           return kind == RingKind::Axial ? verify_axial_relations(n).max()
                                                          : verify_reflection_relations(n).max();
                       }});
    metrics.push_back(
        {"closed form matches solver", [](const auto& a, const auto& n) { return a.max_difference(n); }});
    for (const auto& m : metrics) report.checks.push_back({m.name, 0.0, tolerance, {}});

    for (const SamplePoint& point : sample_points(samples, seed)) {
        if (excluded(kind, point)) continue;
        const WaveVector k(point.k);
        const ScatteringCoefficients analytic = closed_form({kind, point.params}, k);
        const ScatteringCoefficients numeric = full_coefficients(build({kind, point.params}), k);
        ++report.evaluated;
        for (std::size_t i = 0; i < metrics.size(); ++i) {
            const double value = metrics[i].metric(analytic, numeric);
            auto& check = report.checks[i];
            if (!(value <= check.worst)) {
                check.worst = std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
                check.worst_at = point;
            }
        }
    }
    return report;
}

VerificationReport verify_center_relations(const ScatteringCenter& center, std::size_t samples, std::uint64_t seed,
                                           double tolerance) {
    VerificationReport report;
    report.requested = samples;
    const auto maps = find_parity_maps(center);
    VerificationCheck exists{"PT-symmetric parity exists", maps.empty() ? 1.0 : 0.0, 0.5, {}};
    report.checks.push_back(exists);
    if (maps.empty()) return report;

    const bool axial = std::any_of(maps.begin(), maps.end(),
                                   [](const auto& m) { return m.second.kind == PtKind::AxialPT; });
    report.kind = axial ? RingKind::Axial : RingKind::Reflection;
    const auto metrics = metrics_for(report.kind);
    for (const auto& m : metrics) report.checks.push_back({m.name, 0.0, tolerance, {}});

    SampleDomain domain;
    domain.flux_lo = domain.flux_hi = 0.0;
    domain.gamma_lo = domain.gamma_hi = 0.0;
    for (const SamplePoint& point : sample_points(samples, seed, domain)) {
        ScatteringCoefficients sc;
        try {
            sc = full_coefficients(center, WaveVector(point.k));
        } catch (const DegeneratePoint&) {
            continue;
        }
        const double largest = std::max({std::abs(sc.r_left), std::abs(sc.t_left), std::abs(sc.r_right),
                                         std::abs(sc.t_right)});
        if (sc.flags != CoefficientFlags::Ok || !(largest <= kExclusionModulus)) continue;
        ++report.evaluated;
        for (std::size_t i = 0; i < metrics.size(); ++i) {
            const double value = metrics[i].metric(sc, sc);
            auto& check = report.checks[i + 1];
            if (!(value <= check.worst)) {
                check.worst = std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
                check.worst_at = point;
            }
        }
    }
    return report;
}

} // namespace ptscatter
