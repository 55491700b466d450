#include "ptscatter/rhombic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptscatter/detail/limits.hpp"
#include "ptscatter/errors.hpp"

namespace ptscatter {

namespace {

constexpr double kSingularDenominator = 1e-10;

const cplx I{0.0, 1.0};

// Trigonometric pieces shared by both closed forms. The combination
// e^{2ik} cos^2(Phi/2) + sin^2 k is rewritten as
// cos k (cos k + 2i sin k) - e^{2ik} sin^2(Phi/2) so that both terms vanish
// smoothly at k = pi/2, Phi = 2n pi instead of cancelling.
struct Trig {
    double c, s, cp, sp;
    cplx e2;

    Trig(const RingParameters& p, double k)
        : c(std::cos(k)), s(std::sin(k)), cp(std::cos(0.5 * p.flux)), sp(std::sin(0.5 * p.flux)),
          e2(std::polar(1.0, 2.0 * k)) {}

    cplx band_term() const { return c * (c + 2.0 * I * s) - e2 * sp * sp; }
};

struct RawForm {
    cplx denominator;
    cplx r_left, t_left, r_right, t_right; // numerators
};

RawForm axial_raw(const RingParameters& p, double k) {
    const Trig t(p, k);
    const double g = p.gamma;
    RawForm f;
    f.denominator = 4.0 * t.band_term() - g * g;
    f.r_left = g * g + 4.0 * (t.sp * t.sp - t.c * t.c);
    f.r_right = f.r_left;
    f.t_left = 4.0 * I * t.s * (2.0 * t.c * t.cp - g * t.sp);
    f.t_right = 4.0 * I * t.s * (2.0 * t.c * t.cp + g * t.sp);
    return f;
}

RawForm reflection_raw(const RingParameters& p, double k) {
    const Trig t(p, k);
    const double g = p.gamma;
    RawForm f;
    f.denominator = t.c * (t.c + 2.0 * I * t.s) - t.e2 * (t.sp * t.sp + g * g * t.c * t.c);
    f.r_left = (g * g + 2.0 * g * t.s - 1.0) * t.c * t.c + t.sp * t.sp;
    f.r_right = (g * g - 2.0 * g * t.s - 1.0) * t.c * t.c + t.sp * t.sp;
    f.t_left = 2.0 * I * t.s * t.c * t.cp;
    f.t_right = f.t_left;
    return f;
}

RawForm raw_form(RingKind kind, const RingParameters& p, double k) {
    return kind == RingKind::Axial ? axial_raw(p, k) : reflection_raw(p, k);
}

double numerator_scale(const RawForm& f) {
    return std::max({std::abs(f.r_left), std::abs(f.t_left), std::abs(f.r_right), std::abs(f.t_right)});
}

ScatteringCoefficients divide(const RawForm& f, double k) {
    ScatteringCoefficients sc;
    sc.r_left = f.r_left / f.denominator;
    sc.t_left = f.t_left / f.denominator;
    sc.r_right = f.r_right / f.denominator;
    sc.t_right = f.t_right / f.denominator;
    sc.k = k;
    return sc;
}

enum class PointClass { Regular, Removable, Singular };

PointClass classify(const RawForm& f) {
    if (std::abs(f.denominator) >= kSingularDenominator) return PointClass::Regular;
    return numerator_scale(f) < kSingularDenominator ? PointClass::Removable : PointClass::Singular;
}

ScatteringCoefficients limit_along_k(RingKind kind, const RingParameters& p, double k) {
    return detail::richardson_limit([&](double kk) { return divide(raw_form(kind, p, kk), kk); }, k);
}

ScatteringCoefficients evaluate(RingKind kind, const RingParameters& p, const WaveVector& k, bool throw_on_singular) {
    const RawForm f = raw_form(kind, p, k.value());
    switch (classify(f)) {
    case PointClass::Regular:
        return divide(f, k.value());
    case PointClass::Removable:
        return limit_along_k(kind, p, k.value());
    case PointClass::Singular:
        break;
    }
    if (throw_on_singular) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "spectral singularity: |denominator| = " << std::abs(f.denominator) << " at flux = " << p.flux
            << ", gamma = " << p.gamma << ", k = " << k.value();
        throw SpectralSingularity(p.flux, p.gamma, k.value(), msg.str());
    }
    ScatteringCoefficients sc = divide(f, k.value());
    sc.flags = CoefficientFlags::NearSingular;
    return sc;
}

ScatteringCenter ring(const RingParameters& p) {
    const cplx link = -std::polar(1.0, p.link_phase());
    ScatteringCenter c;
    c.sites = {ring_site::left, ring_site::upper, ring_site::right, ring_site::lower};
    // <1|H|A>, <A|H|-1>, <-1|H|B>, <B|H|1>: each step of -1 -> A -> 1 -> B -> -1
    // picks up the Peierls phase Phi/4.
    c.hoppings = {
        {ring_site::right, ring_site::upper, link},
        {ring_site::upper, ring_site::left, link},
        {ring_site::left, ring_site::lower, link},
        {ring_site::lower, ring_site::right, link},
    };
    c.attach_left = ring_site::left;
    c.attach_right = ring_site::right;
    return c;
}

} // namespace

std::string_view to_string(RingKind kind) {
    return kind == RingKind::Axial ? "axial" : "reflection";
}

RingKind parse_ring_kind(std::string_view name) {
    if (name == "axial") return RingKind::Axial;
    if (name == "reflection") return RingKind::Reflection;
    throw DomainError("unknown model '" + std::string(name) + "' (expected axial or reflection)");
}

ScatteringCenter build_axial(const RingParameters& p) {
    ScatteringCenter c = ring(p);
    c.onsite[ring_site::upper] = cplx(0.0, -p.gamma);
    c.onsite[ring_site::lower] = cplx(0.0, p.gamma);
    return c;
}

ScatteringCenter build_reflection(const RingParameters& p) {
    ScatteringCenter c = ring(p);
    c.onsite[ring_site::left] = cplx(0.0, p.gamma);
    c.onsite[ring_site::right] = cplx(0.0, -p.gamma);
    return c;
}

ScatteringCenter build(const RhombicConfig& config) {
    return config.kind == RingKind::Axial ? build_axial(config.params) : build_reflection(config.params);
}

ParityMap axial_parity() {
    return ParityMap::from_swaps({ring_site::left, ring_site::upper, ring_site::right, ring_site::lower},
                                 {{ring_site::upper, ring_site::lower}});
}

ParityMap reflection_parity() {
    return ParityMap::from_swaps({ring_site::left, ring_site::upper, ring_site::right, ring_site::lower},
                                 {{ring_site::left, ring_site::right}});
}

ParityMap canonical_parity(RingKind kind) {
    return kind == RingKind::Axial ? axial_parity() : reflection_parity();
}

std::vector<std::string> ring_cycle() {
    return {ring_site::left, ring_site::upper, ring_site::right, ring_site::lower, ring_site::left};
}

ScatteringCoefficients axial_coefficients(const RingParameters& p, const WaveVector& k) {
    return evaluate(RingKind::Axial, p, k, true);
}

ScatteringCoefficients reflection_coefficients(const RingParameters& p, const WaveVector& k) {
    return evaluate(RingKind::Reflection, p, k, false);
}

ScatteringCoefficients closed_form(const RhombicConfig& config, const WaveVector& k) {
    return evaluate(config.kind, config.params, k, false);
}

DenominatorValue ring_denominator(RingKind kind, const RingParameters& p, double k) {
    const Trig t(p, k);
    const double g = p.gamma;
    DenominatorValue d;
    if (kind == RingKind::Axial) {
        d.value = 4.0 * t.band_term() - g * g;
        d.d_k = 8.0 * I * t.e2 * t.cp * t.cp + 8.0 * t.s * t.c;
        d.d_flux = -4.0 * t.e2 * t.cp * t.sp;
        d.d_gamma = -2.0 * g;
    } else {
        const cplx inner = g * g * t.c * t.c - t.cp * t.cp;
        d.value = t.c * (t.c + 2.0 * I * t.s) - t.e2 * (t.sp * t.sp + g * g * t.c * t.c);
        d.d_k = 2.0 * t.s * t.c - 2.0 * I * t.e2 * inner + 2.0 * g * g * t.c * t.s * t.e2;
        d.d_flux = -t.e2 * t.cp * t.sp;
        d.d_gamma = -2.0 * g * t.c * t.c * t.e2;
    }
    return d;
}

double ring_numerator_scale(RingKind kind, const RingParameters& p, double k) {
    return numerator_scale(raw_form(kind, p, k));
}

std::string_view to_string(Channel channel) {
    switch (channel) {
    case Channel::ReflectionLeft: return "rL";
    case Channel::ReflectionRight: return "rR";
    case Channel::TransmissionLeft: return "tL";
    case Channel::TransmissionRight: return "tR";
    }
    return "?";
}

double zero_numerator(RingKind kind, Channel channel, const RingParameters& p, double k) {
    const Trig t(p, k);
    const double g = p.gamma;
    if (kind == RingKind::Axial) {
        switch (channel) {
        case Channel::ReflectionLeft:
        case Channel::ReflectionRight: return g * g + 4.0 * (t.sp * t.sp - t.c * t.c);
        case Channel::TransmissionLeft: return 2.0 * t.c * t.cp - g * t.sp;
        case Channel::TransmissionRight: return 2.0 * t.c * t.cp + g * t.sp;
        }
    }
    switch (channel) {
    case Channel::ReflectionLeft: return (g * g + 2.0 * g * t.s - 1.0) * t.c * t.c + t.sp * t.sp;
    case Channel::ReflectionRight: return (g * g - 2.0 * g * t.s - 1.0) * t.c * t.c + t.sp * t.sp;
    case Channel::TransmissionLeft:
    case Channel::TransmissionRight: return 2.0 * t.s * t.c * t.cp;
    }
    return 0.0;
}

} // namespace ptscatter
