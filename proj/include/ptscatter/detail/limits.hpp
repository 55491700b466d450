#pragma once

#include <utility>

#include "ptscatter/coefficients.hpp"

namespace ptscatter::detail {

inline constexpr double kLimitStep = 1e-6;

/// Two-sided Richardson extrapolation of k -> k0 for a coefficient
/// evaluator. The symmetric mean removes odd orders; combining steps h
/// and h/2 removes the h^2 term.
template <class Eval>
ScatteringCoefficients richardson_limit(Eval&& eval, double k0, double h = kLimitStep) {
    auto mean = [&](double step) {
        const ScatteringCoefficients lo = eval(k0 - step);
        const ScatteringCoefficients hi = eval(k0 + step);
        ScatteringCoefficients m;
        m.r_left = 0.5 * (lo.r_left + hi.r_left);
        m.t_left = 0.5 * (lo.t_left + hi.t_left);
        m.r_right = 0.5 * (lo.r_right + hi.r_right);
        m.t_right = 0.5 * (lo.t_right + hi.t_right);
        return m;
    };
    const ScatteringCoefficients coarse = mean(h);
    const ScatteringCoefficients fine = mean(0.5 * h);
    auto extrapolate = [](cplx f, cplx c) { return (4.0 * f - c) / 3.0; };

    ScatteringCoefficients out;
    out.r_left = extrapolate(fine.r_left, coarse.r_left);
    out.t_left = extrapolate(fine.t_left, coarse.t_left);
    out.r_right = extrapolate(fine.r_right, coarse.r_right);
    out.t_right = extrapolate(fine.t_right, coarse.t_right);
    out.k = k0;
    out.flags = CoefficientFlags::LimitEvaluated;
    return out;
}

} // namespace ptscatter::detail
