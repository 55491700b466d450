#include "ptscatter/solver.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <Eigen/SVD>

#include "ptscatter/detail/limits.hpp"
#include "ptscatter/errors.hpp"

namespace ptscatter {

namespace {

constexpr double kConsistencyTolerance = 1e-8;
constexpr double kSingularityTolerance = 1e-8;
constexpr double kTransmissionFloor = 1e-13;

enum LeadSlot { LeftPlus = 0, LeftMinus = 1, RightPlus = 2, RightMinus = 3 };

// Each lead coefficient is either prescribed or an unknown of the system.
using LeadSpec = std::array<std::optional<cplx>, 4>;

struct Affine {
    cplx constant;
    Eigen::RowVectorXcd coeffs;
};

struct Problem {
    Eigen::MatrixXcd matrix;
    Eigen::VectorXcd rhs;
    std::array<Eigen::Index, 4> lead_unknown{-1, -1, -1, -1};
    std::vector<Eigen::Index> site_unknown; // -1 for attachment sites
    std::size_t left = 0;
    std::size_t right = 0;
};

cplx propagation_factor(const WaveVector& k, Continuation cont) {
    return std::polar(1.0, cont == Continuation::Forward ? k.value() : -k.value());
}

Problem assemble(const ScatteringCenter& center, cplx z, const LeadSpec& leads) {
    Problem p;
    p.left = center.index_of(center.attach_left);
    p.right = center.index_of(center.attach_right);

    Eigen::Index unknowns = 0;
    for (int slot = 0; slot < 4; ++slot) {
        if (!leads[slot]) p.lead_unknown[slot] = unknowns++;
    }
    p.site_unknown.assign(center.size(), -1);
    for (std::size_t s = 0; s < center.size(); ++s) {
        if (s != p.left && s != p.right) p.site_unknown[s] = unknowns++;
    }
    const auto n = static_cast<Eigen::Index>(center.size());

    auto lead_value = [&](int slot, cplx weight) {
        Affine a{cplx{}, Eigen::RowVectorXcd::Zero(unknowns)};
        if (leads[slot]) {
            a.constant = weight * *leads[slot];
        } else {
            a.coeffs(p.lead_unknown[slot]) = weight;
        }
        return a;
    };
    auto combine = [](Affine x, const Affine& y) {
        x.constant += y.constant;
        x.coeffs += y.coeffs;
        return x;
    };

    const cplx z2 = z * z;
    // f(-1), f(-2), f(+1), f(+2) from the lead ansatz.
    const Affine f_m1 = combine(lead_value(LeftPlus, 1.0 / z), lead_value(LeftMinus, z));
    const Affine f_m2 = combine(lead_value(LeftPlus, 1.0 / z2), lead_value(LeftMinus, z2));
    const Affine f_p1 = combine(lead_value(RightPlus, z), lead_value(RightMinus, 1.0 / z));
    const Affine f_p2 = combine(lead_value(RightPlus, z2), lead_value(RightMinus, 1.0 / z2));

    Eigen::MatrixXcd amp_coeffs = Eigen::MatrixXcd::Zero(n, unknowns);
    Eigen::VectorXcd amp_const = Eigen::VectorXcd::Zero(n);
    for (std::size_t s = 0; s < center.size(); ++s) {
        const auto row = static_cast<Eigen::Index>(s);
        if (s == p.left) {
            amp_coeffs.row(row) = f_m1.coeffs;
            amp_const(row) = f_m1.constant;
        } else if (s == p.right) {
            amp_coeffs.row(row) = f_p1.coeffs;
            amp_const(row) = f_p1.constant;
        } else {
            amp_coeffs(row, p.site_unknown[s]) = 1.0;
        }
    }

    const cplx energy = -(z + 1.0 / z);
    Eigen::MatrixXcd shifted = hamiltonian_matrix(center);
    shifted.diagonal().array() -= energy;

    p.matrix = shifted * amp_coeffs;
    Eigen::VectorXcd constant = shifted * amp_const;
    const auto l = static_cast<Eigen::Index>(p.left);
    const auto r = static_cast<Eigen::Index>(p.right);
    p.matrix.row(l) -= f_m2.coeffs;
    constant(l) -= f_m2.constant;
    p.matrix.row(r) -= f_p2.coeffs;
    constant(r) -= f_p2.constant;
    p.rhs = -constant;
    return p;
}

struct DenseSolve {
    Eigen::VectorXcd x;
    double condition = 1.0;
    bool ill_conditioned = false;
    bool consistent = true;
};

DenseSolve solve_dense(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b) {
    DenseSolve out;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const double rcond = lu.rcond();
    if (rcond > 1.0 / kConditionLimit) {
        out.x = lu.solve(b);
        out.condition = 1.0 / rcond;
        return out;
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    out.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (out.condition <= kConditionLimit) {
        out.x = lu.solve(b);
        return out;
    }
    out.ill_conditioned = true;
    svd.setThreshold(1.0 / kConditionLimit);
    Eigen::VectorXcd minimal = svd.solve(b);
    const double scale = std::max(b.norm(), std::numeric_limits<double>::min());
    out.consistent = (a * minimal - b).norm() / scale < kConsistencyTolerance;
    out.x = out.consistent ? minimal : Eigen::VectorXcd(lu.solve(b));
    return out;
}

ScatteringState extract_state(const ScatteringCenter& center, const Problem& p, const LeadSpec& leads,
                              const Eigen::VectorXcd& x, cplx z, Continuation cont) {
    std::array<cplx, 4> lead{};
    for (int slot = 0; slot < 4; ++slot) {
        lead[slot] = leads[slot] ? *leads[slot] : x(p.lead_unknown[slot]);
    }
    ScatteringState st;
    st.left_plus = lead[LeftPlus];
    st.left_minus = lead[LeftMinus];
    st.right_plus = lead[RightPlus];
    st.right_minus = lead[RightMinus];
    st.continuation = cont;
    for (std::size_t s = 0; s < center.size(); ++s) {
        cplx value;
        if (s == p.left) {
            value = lead[LeftPlus] / z + lead[LeftMinus] * z;
        } else if (s == p.right) {
            value = lead[RightPlus] * z + lead[RightMinus] / z;
        } else {
            value = x(p.site_unknown[s]);
        }
        st.internal[center.sites[s]] = value;
    }
    return st;
}

[[noreturn]] void throw_degenerate(const WaveVector& k, double condition) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "degenerate point at k = " << k.value() << " (condition " << condition
        << "): coefficients exist only as a limit; use coefficients_with_limits()";
    throw DegeneratePoint(k.value(), msg.str());
}

cplx outgoing_sign_value(SingularBranch branch, int sign) {
    // Emission: f(j>0) = -+i e^{ikj}; absorption: f(j>0) = +-i e^{-ikj}.
    const cplx i{0.0, 1.0};
    return branch == SingularBranch::Emission ? -static_cast<double>(sign) * i : static_cast<double>(sign) * i;
}

LeadSpec homogeneous_spec(SingularBranch branch) {
    LeadSpec spec;
    if (branch == SingularBranch::Emission) {
        spec[LeftPlus] = cplx{};
        spec[RightMinus] = cplx{};
    } else {
        spec[LeftMinus] = cplx{};
        spec[RightPlus] = cplx{};
    }
    return spec;
}

} // namespace

SideSolution solve_scattering(const ScatteringCenter& center, const WaveVector& k, Side side,
                              Continuation continuation) {
    require_valid(center);
    const cplx z = propagation_factor(k, continuation);

    LeadSpec leads;
    if (side == Side::Left) {
        leads[LeftPlus] = 1.0;
        leads[RightMinus] = 0.0;
    } else {
        leads[RightMinus] = 1.0;
        leads[LeftPlus] = 0.0;
    }
    const Problem p = assemble(center, z, leads);
    const DenseSolve sol = solve_dense(p.matrix, p.rhs);
    if (sol.ill_conditioned && sol.consistent) throw_degenerate(k, sol.condition);

    SideSolution out;
    out.state = extract_state(center, p, leads, sol.x, z, continuation);
    if (side == Side::Left) {
        out.reflection = out.state.left_minus;
        out.transmission = out.state.right_plus;
    } else {
        out.reflection = out.state.right_plus;
        out.transmission = out.state.left_minus;
    }
    out.condition = sol.condition;
    out.flags = sol.ill_conditioned ? CoefficientFlags::NearSingular : CoefficientFlags::Ok;
    out.residual = residual(center, k, out.state);
    return out;
}

ScatteringCoefficients full_coefficients(const ScatteringCenter& center, const WaveVector& k,
                                         Continuation continuation) {
    const SideSolution left = solve_scattering(center, k, Side::Left, continuation);
    const SideSolution right = solve_scattering(center, k, Side::Right, continuation);
    ScatteringCoefficients sc;
    sc.r_left = left.reflection;
    sc.t_left = left.transmission;
    sc.r_right = right.reflection;
    sc.t_right = right.transmission;
    sc.k = k.value();
    sc.flags = left.flags | right.flags;
    return sc;
}

ScatteringCoefficients coefficients_with_limits(const ScatteringCenter& center, const WaveVector& k) {
    try {
        return full_coefficients(center, k);
    } catch (const DegeneratePoint&) {
        return detail::richardson_limit(
            [&center](double kk) { return full_coefficients(center, WaveVector(kk)); }, k.value());
    }
}

TransferMatrix transfer_matrix(const ScatteringCoefficients& sc) {
    if (std::abs(sc.t_right) < kTransmissionFloor) {
        throw NotInvertible("transfer matrix undefined: t_R = 0 (one-way transmission zero)");
    }
    TransferMatrix m;
    m.m22 = 1.0 / sc.t_right;
    m.m12 = sc.r_right / sc.t_right;
    m.m21 = -sc.r_left / sc.t_right;
    m.m11 = sc.t_left - sc.r_left * sc.r_right / sc.t_right;
    return m;
}

ScatteringCoefficients coefficients_from_transfer(const TransferMatrix& m, double k) {
    if (m.m22 == cplx{}) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        throw SpectralSingularity(nan, nan, k, "transfer matrix has m22 = 0: coefficients diverge");
    }
    ScatteringCoefficients sc;
    sc.t_right = 1.0 / m.m22;
    sc.r_right = m.m12 / m.m22;
    sc.r_left = -m.m21 / m.m22;
    sc.t_left = m.determinant() / m.m22;
    sc.k = k;
    return sc;
}

TransferMatrix direct_transfer_matrix(const ScatteringCenter& center, const WaveVector& k) {
    require_valid(center);
    const cplx z = k.bloch();
    std::array<std::array<cplx, 2>, 2> columns{};
    for (int col = 0; col < 2; ++col) {
        LeadSpec leads;
        leads[LeftPlus] = col == 0 ? 1.0 : 0.0;
        leads[LeftMinus] = col == 0 ? 0.0 : 1.0;
        const Problem p = assemble(center, z, leads);
        const DenseSolve sol = solve_dense(p.matrix, p.rhs);
        if (sol.ill_conditioned && !sol.consistent) {
            throw NotInvertible("transfer matrix undefined: t_R = 0 (one-way transmission zero)");
        }
        columns[col] = {sol.x(p.lead_unknown[RightPlus]), sol.x(p.lead_unknown[RightMinus])};
    }
    return {columns[0][0], columns[1][0], columns[0][1], columns[1][1]};
}

double residual(const ScatteringCenter& center, const WaveVector& k, const ScatteringState& state) {
    const cplx z = propagation_factor(k, state.continuation);
    const cplx energy = -(z + 1.0 / z);
    const auto n = static_cast<Eigen::Index>(center.size());

    Eigen::VectorXcd psi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto it = state.internal.find(center.sites[static_cast<std::size_t>(i)]);
        if (it == state.internal.end()) throw DomainError("state does not cover site " + center.sites[i]);
        psi(i) = it->second;
    }
    Eigen::VectorXcd eq = hamiltonian_matrix(center) * psi - energy * psi;

    const auto l = static_cast<Eigen::Index>(center.index_of(center.attach_left));
    const auto r = static_cast<Eigen::Index>(center.index_of(center.attach_right));
    auto left_lead = [&](int j) { return state.left_plus * std::pow(z, j) + state.left_minus * std::pow(z, -j); };
    auto right_lead = [&](int j) { return state.right_plus * std::pow(z, j) + state.right_minus * std::pow(z, -j); };
    eq(l) -= left_lead(-2);
    eq(r) -= right_lead(2);

    double worst = eq.cwiseAbs().maxCoeff();
    // Lead sites j = -2 and j = +2 see the attachment amplitudes.
    worst = std::max(worst, std::abs(-left_lead(-3) - psi(l) - energy * left_lead(-2)));
    worst = std::max(worst, std::abs(-right_lead(3) - psi(r) - energy * right_lead(2)));
    return worst;
}

namespace {

struct HomogeneousSystem {
    Problem problem;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd;
};

HomogeneousSystem homogeneous(const ScatteringCenter& center, const WaveVector& k, SingularBranch branch) {
    Problem p = assemble(center, k.bloch(), homogeneous_spec(branch));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(p.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {std::move(p), std::move(svd)};
}

double measure(const Eigen::JacobiSVD<Eigen::MatrixXcd>& svd) {
    const auto& sv = svd.singularValues();
    return sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
}

} // namespace

double singularity_measure(const ScatteringCenter& center, const WaveVector& k) {
    require_valid(center);
    return measure(homogeneous(center, k, SingularBranch::Emission).svd);
}

SingularState singular_state(const ScatteringCenter& center, const WaveVector& k, SingularBranch branch) {
    require_valid(center);
    const HomogeneousSystem sys = homogeneous(center, k, branch);
    if (measure(sys.svd) > kSingularityTolerance) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "not a spectral singularity at k = " << k.value() << " (measure " << measure(sys.svd) << ")";
        throw DomainError(msg.str());
    }
    const cplx z = k.bloch();
    const bool emission = branch == SingularBranch::Emission;
    const int incoming_slot = emission ? LeftMinus : LeftPlus;
    const int outgoing_slot = emission ? RightPlus : RightMinus;

    SingularState best;
    best.residual = std::numeric_limits<double>::infinity();

    // Paper forms: unit amplitude on the left, -+i / +-i on the right.
    for (int sign : {+1, -1}) {
        LeadSpec leads = homogeneous_spec(branch);
        leads[incoming_slot] = 1.0;
        leads[outgoing_slot] = outgoing_sign_value(branch, sign);
        const Problem p = assemble(center, z, leads);
        Eigen::VectorXcd x = p.matrix.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(p.rhs);
        SingularState candidate{extract_state(center, p, leads, x, z, Continuation::Forward), 0.0, sign};
        candidate.residual = residual(center, k, candidate.state);
        if (candidate.residual < best.residual) best = std::move(candidate);
    }

    // Raw null vector, normalised to unit amplitude on the left lead.
    const Eigen::VectorXcd null = sys.svd.matrixV().col(sys.svd.matrixV().cols() - 1);
    const cplx norm = null(sys.problem.lead_unknown[incoming_slot]);
    if (std::abs(norm) > 1e-12) {
        const Eigen::VectorXcd x = null / norm;
        SingularState candidate{
            extract_state(center, sys.problem, homogeneous_spec(branch), x, z, Continuation::Forward), 0.0, 0};
        candidate.residual = residual(center, k, candidate.state);
        if (candidate.residual < 0.5 * best.residual) best = std::move(candidate);
    }

    if (!(best.residual < kSingularityTolerance)) {
        std::ostringstream msg;
        msg << "singular state residual " << best.residual << " exceeds tolerance";
        throw DomainError(msg.str());
    }
    return best;
}

} // namespace ptscatter
