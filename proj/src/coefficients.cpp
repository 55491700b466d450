#include "ptscatter/coefficients.hpp"

#include <algorithm>

namespace ptscatter {

std::string flags_to_string(CoefficientFlags flags) {
    const bool limit = has_flag(flags, CoefficientFlags::LimitEvaluated);
    const bool near = has_flag(flags, CoefficientFlags::NearSingular);
    if (limit && near) return "limit|near_singular";
    if (limit) return "limit";
    if (near) return "near_singular";
    return "ok";
}

double ScatteringCoefficients::max_difference(const ScatteringCoefficients& o) const {
    return std::max({std::abs(r_left - o.r_left), std::abs(t_left - o.t_left),
                     std::abs(r_right - o.r_right), std::abs(t_right - o.t_right)});
}

} // namespace ptscatter
