#include "ptscatter/pt_symmetry.hpp"

#include <algorithm>
#include <numeric>

#include "ptscatter/errors.hpp"

namespace ptscatter {

namespace {

constexpr std::size_t kMaxSearchSites = 10;

std::vector<Eigen::Index> permutation_of(const ScatteringCenter& center, const ParityMap& parity) {
    if (parity.mapping().size() != center.size()) {
        throw DomainError("parity map must cover exactly the centre sites");
    }
    std::vector<Eigen::Index> perm(center.size());
    for (std::size_t i = 0; i < center.size(); ++i) {
        perm[i] = static_cast<Eigen::Index>(center.index_of(parity.image(center.sites[i])));
    }
    return perm;
}

// max |op(H[P i][P j]) - H[i][j]|
template <class Op>
double permuted_residual(const Eigen::MatrixXcd& h, const std::vector<Eigen::Index>& perm, Op op) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        for (Eigen::Index j = 0; j < h.cols(); ++j) {
            worst = std::max(worst, std::abs(op(h(perm[i], perm[j])) - h(i, j)));
        }
    }
    return worst;
}

enum class LeadAction { Fixes, Swaps, Other };

LeadAction lead_action(const ScatteringCenter& center, const ParityMap& parity) {
    const auto& l = parity.image(center.attach_left);
    const auto& r = parity.image(center.attach_right);
    if (l == center.attach_left && r == center.attach_right) return LeadAction::Fixes;
    if (l == center.attach_right && r == center.attach_left) return LeadAction::Swaps;
    return LeadAction::Other;
}

void enumerate_involutions(std::vector<std::size_t>& image, std::vector<bool>& used, std::size_t next,
                           std::vector<std::vector<std::size_t>>& out) {
    while (next < image.size() && used[next]) ++next;
    if (next == image.size()) {
        out.push_back(image);
        return;
    }
    used[next] = true;
    image[next] = next;
    enumerate_involutions(image, used, next + 1, out);
    for (std::size_t other = next + 1; other < image.size(); ++other) {
        if (used[other]) continue;
        used[other] = true;
        image[next] = other;
        image[other] = next;
        enumerate_involutions(image, used, next + 1, out);
        used[other] = false;
        image[other] = other;
    }
    image[next] = next;
    used[next] = false;
}

} // namespace

std::string_view to_string(PtKind kind) {
    switch (kind) {
    case PtKind::AxialPT: return "AxialPT";
    case PtKind::ReflectionPT: return "ReflectionPT";
    case PtKind::PSymmetric: return "PSymmetric";
    case PtKind::TSymmetric: return "TSymmetric";
    case PtKind::None: return "None";
    }
    return "None";
}

PtClassification classify_pt(const ScatteringCenter& center, const ParityMap& parity) {
    const auto perm = permutation_of(center, parity);
    const Eigen::MatrixXcd h = hamiltonian_matrix(center);

    PtClassification out;
    out.parity = parity;
    out.pt_residual = permuted_residual(h, perm, [](cplx v) { return std::conj(v); });
    out.p_residual = permuted_residual(h, perm, [](cplx v) { return v; });
    out.t_residual = (h.conjugate() - h).cwiseAbs().maxCoeff();
    out.residual = out.pt_residual;

    const LeadAction action = lead_action(center, parity);
    if (out.pt_residual < kSymmetryTolerance && action != LeadAction::Other) {
        out.kind = action == LeadAction::Fixes ? PtKind::AxialPT : PtKind::ReflectionPT;
    } else if (!parity.is_identity() && action != LeadAction::Other && out.p_residual < kSymmetryTolerance) {
        out.kind = PtKind::PSymmetric;
        out.residual = out.p_residual;
    } else if (out.t_residual < kSymmetryTolerance) {
        out.kind = PtKind::TSymmetric;
        out.residual = out.t_residual;
    }
    return out;
}

std::vector<ParityMap> lead_compatible_involutions(const ScatteringCenter& center) {
    require_valid(center);
    if (center.size() > kMaxSearchSites) {
        throw SizeLimit("parity search is limited to " + std::to_string(kMaxSearchSites) + " sites (centre has " +
                        std::to_string(center.size()) + "); pass an explicit parity map instead");
    }
    std::vector<std::size_t> image(center.size());
    std::iota(image.begin(), image.end(), std::size_t{0});
    std::vector<bool> used(center.size(), false);
    std::vector<std::vector<std::size_t>> all;
    enumerate_involutions(image, used, 0, all);

    std::vector<ParityMap> out;
    for (const auto& img : all) {
        std::map<std::string, std::string> m;
        for (std::size_t i = 0; i < img.size(); ++i) m[center.sites[i]] = center.sites[img[i]];
        ParityMap p(std::move(m));
        if (lead_action(center, p) != LeadAction::Other) out.push_back(std::move(p));
    }
    return out;
}

std::vector<std::pair<ParityMap, PtClassification>> find_parity_maps(const ScatteringCenter& center) {
    std::vector<std::pair<ParityMap, PtClassification>> out;
    for (auto& p : lead_compatible_involutions(center)) {
        PtClassification c = classify_pt(center, p);
        if (c.kind == PtKind::AxialPT || c.kind == PtKind::ReflectionPT) out.emplace_back(std::move(p), std::move(c));
    }
    return out;
}

double RelationResiduals::max() const { return std::max({first, second, aux_first, aux_second}); }

RelationResiduals verify_axial_relations(const ScatteringCoefficients& sc) {
    const cplx rl = sc.r_left, rr = sc.r_right, tl = sc.t_left, tr = sc.t_right;
    return {
        std::abs(std::norm(rl) + tr * std::conj(tl) - 1.0),
        std::abs(std::norm(rr) + tl * std::conj(tr) - 1.0),
        std::abs(std::conj(rl) * tl + rr * std::conj(tl)),
        std::abs(std::conj(rr) * tr + rl * std::conj(tr)),
    };
}

RelationResiduals verify_reflection_relations(const ScatteringCoefficients& sc) {
    const cplx rl = sc.r_left, rr = sc.r_right, tl = sc.t_left, tr = sc.t_right;
    return {
        std::abs(std::norm(tl) + rr * std::conj(rl) - 1.0),
        std::abs(std::norm(tr) + rl * std::conj(rr) - 1.0),
        std::abs(rl * std::conj(tl) + std::conj(rl) * tr),
        std::abs(rr * std::conj(tr) + std::conj(rr) * tl),
    };
}

} // namespace ptscatter
