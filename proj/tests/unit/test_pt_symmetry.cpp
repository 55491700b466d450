#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "ptscatter/errors.hpp"
#include "ptscatter/pt_symmetry.hpp"
#include "ptscatter/rhombic.hpp"
#include "ptscatter/solver.hpp"
#include "ptscatter/verification.hpp"

using namespace ptscatter;

namespace {

bool has_plain_parity(const ScatteringCenter& c) {
    for (const auto& p : lead_compatible_involutions(c)) {
        if (!p.is_identity() && classify_pt(c, p).p_residual < kSymmetryTolerance) return true;
    }
    return false;
}

} // namespace

TEST_SUITE("pt_symmetry") {
    TEST_CASE("rings classify under their canonical parity") {
        const auto ax = classify_pt(build_axial({kPi / 2, 0.5}), axial_parity());
        CHECK(ax.kind == PtKind::AxialPT);
        CHECK(ax.residual < kSymmetryTolerance);
        CHECK(ax.parity == axial_parity());

        const auto re = classify_pt(build_reflection({kPi / 2, 0.5}), reflection_parity());
        CHECK(re.kind == PtKind::ReflectionPT);
        CHECK(re.residual < kSymmetryTolerance);

        CHECK(classify_pt(build_axial({kPi / 2, 0.5}), reflection_parity()).kind == PtKind::None);
        CHECK(classify_pt(build_reflection({kPi / 2, 0.5}), axial_parity()).kind == PtKind::None);
    }

    TEST_CASE("P and T on their own") {
        // Rotating the Hermitian ring by pi keeps the flux orientation.
        const auto rotation = ParityMap::from_swaps({"-1", "A", "1", "B"}, {{"-1", "1"}, {"A", "B"}});
        const auto hermitian = build_axial({kPi / 2, 0.0});
        CHECK(classify_pt(hermitian, rotation).kind == PtKind::PSymmetric);

        auto bond = testing::two_site_bond();
        bond.onsite["L"] = 0.3;
        bond.onsite["R"] = -0.2;
        const auto swap = ParityMap::from_swaps(bond.sites, {{"L", "R"}});
        const auto t = classify_pt(bond, swap);
        CHECK(t.kind == PtKind::TSymmetric);
        CHECK(t.t_residual == 0.0);
        CHECK(t.p_residual > 0.1);

        bond.onsite["R"] = cplx(0.3, 0.1);
        CHECK(classify_pt(bond, swap).kind == PtKind::None);
    }

    TEST_CASE("find_parity_maps") {
        const auto ax = find_parity_maps(build_axial({kPi / 2, 0.5}));
        REQUIRE(ax.size() == 1);
        CHECK(ax[0].first == axial_parity());
        CHECK(ax[0].second.kind == PtKind::AxialPT);

        const auto re = find_parity_maps(build_reflection({kPi / 2, 0.5}));
        REQUIRE(re.size() == 1);
        CHECK(re[0].first == reflection_parity());
        CHECK(re[0].second.kind == PtKind::ReflectionPT);

        std::mt19937_64 rng(21);
        for (int n = 4; n <= 7; ++n) CHECK(find_parity_maps(testing::random_center(rng, n, false)).empty());
    }

    TEST_CASE("plain parity needs gamma = 0 or flux = 0 mod 4 pi") {
        for (auto kind : {RingKind::Axial, RingKind::Reflection}) {
            for (double flux : {0.0, kPi / 3, kPi / 2, kPi, 2 * kPi, 3 * kPi, 4 * kPi}) {
                for (double gamma : {0.0, 0.5, -1.3}) {
                    const bool expected = gamma == 0.0 || testing::circular_distance(flux / 2, 0.0) < 1e-12;
                    CAPTURE(flux);
                    CAPTURE(gamma);
                    CHECK(has_plain_parity(build({kind, {flux, gamma}})) == expected);
                }
            }
        }
    }

    TEST_CASE("classification errors") {
        CHECK_THROWS_AS(classify_pt(build_axial({0.0, 0.0}), ParityMap::from_swaps({"A", "B"}, {{"A", "B"}})),
                        DomainError);
        std::mt19937_64 rng(1);
        CHECK_THROWS_AS(lead_compatible_involutions(testing::random_center(rng, 11, false)), SizeLimit);
        CHECK_NOTHROW(lead_compatible_involutions(testing::random_center(rng, 10, false)));
    }

    TEST_CASE("relation examples") {
        const auto ax = axial_coefficients({kPi / 2, 0.5}, WaveVector(kPi / 3));
        CHECK(verify_axial_relations(ax).max() < 1e-13);
        const auto re = reflection_coefficients({kPi / 2, 0.5}, WaveVector(kPi / 3));
        CHECK(verify_reflection_relations(re).max() < 1e-13);

        ScatteringCoefficients clear;
        clear.t_left = clear.t_right = 1.0;
        CHECK(verify_axial_relations(clear).max() == 0.0);
        CHECK(verify_reflection_relations(clear).max() == 0.0);
    }

    TEST_CASE("relations hold on random samples and fail for the wrong family") {
        const auto pts = sample_points(500, 31);
        int used = 0, axial_rejects = 0, reflection_rejects = 0;
        double worst = 0.0;
        for (const auto& pt : pts) {
            if (excluded(RingKind::Axial, pt) || excluded(RingKind::Reflection, pt)) continue;
            ++used;
            const WaveVector k(pt.k);
            const auto ax = full_coefficients(build_axial(pt.params), k);
            const auto re = full_coefficients(build_reflection(pt.params), k);
            worst = std::max({worst, verify_axial_relations(ax).max(), verify_reflection_relations(re).max()});
            if (verify_reflection_relations(ax).max() > 1e-3) ++axial_rejects;
            if (verify_axial_relations(re).max() > 1e-3) ++reflection_rejects;
        }
        REQUIRE(used > 400);
        CHECK(worst < 1e-10);
        CHECK(axial_rejects > 0.8 * used);
        CHECK(reflection_rejects > 0.8 * used);
    }

    TEST_CASE("random non-PT centres violate both families") {
        std::mt19937_64 rng(8);
        int violations = 0;
        const int total = 100;
        for (int i = 0; i < total; ++i) {
            const auto c = testing::random_center(rng, 5, false);
            const auto sc = full_coefficients(c, WaveVector(0.4 + 0.02 * i));
            if (verify_axial_relations(sc).max() > 1e-3 && verify_reflection_relations(sc).max() > 1e-3) ++violations;
        }
        CHECK(violations >= 80);
    }

    TEST_CASE("relation residuals near a spectral singularity") {
        // Reported only: amplitudes diverge here and residuals lose digits.
        for (double eps : {1e-2, 1e-4, 1e-6}) {
            const auto sc = axial_coefficients({kPi / 2, std::sqrt(2.0) - eps}, WaveVector(kPi / 2));
            MESSAGE("eps " << eps << " |t_L| " << std::abs(sc.t_left) << " residual "
                           << verify_axial_relations(sc).max());
        }
    }
}

TEST_SUITE("verification") {
    TEST_CASE("sampling is deterministic and covers the domain") {
        const auto a = sample_points(100, 7);
        const auto b = sample_points(100, 7);
        const auto c = sample_points(100, 8);
        REQUIRE(a.size() == 100);
        bool same = true, differ = false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            same = same && a[i].k == b[i].k && a[i].params.flux == b[i].params.flux;
            differ = differ || a[i].k != c[i].k;
            CHECK(a[i].k > 0.0);
            CHECK(a[i].k < kPi);
            CHECK(a[i].params.gamma >= -2.0);
            CHECK(a[i].params.gamma <= 2.0);
        }
        CHECK(same);
        CHECK(differ);
    }

    TEST_CASE("exclusion around singular and degenerate points") {
        CHECK(excluded(RingKind::Axial, {{kPi / 2, std::sqrt(2.0)}, kPi / 2}));
        CHECK(excluded(RingKind::Reflection, {{0.0, 0.5}, kPi / 2}));
        CHECK_FALSE(excluded(RingKind::Axial, {{kPi / 2, 0.5}, 1.0}));
    }

    TEST_CASE("both ring families pass their relation suites") {
        for (auto kind : {RingKind::Axial, RingKind::Reflection}) {
            const auto report = verify_relations(kind, 1000, 7);
            CAPTURE(to_string(kind));
            CHECK(report.requested == 1000);
            CHECK(report.evaluated > 900);
            CHECK(report.checks.size() >= 6);
            for (const auto& check : report.checks) {
                CAPTURE(check.name);
                CHECK(check.passed());
            }
            CHECK(report.passed());
            CHECK_FALSE(report.first_failure().has_value());
        }
    }

    TEST_CASE("a zero tolerance makes the suite fail") {
        const auto report = verify_relations(RingKind::Axial, 50, 3, 0.0);
        CHECK_FALSE(report.passed());
        CHECK(report.first_failure().has_value());
    }

    TEST_CASE("generic centre suites") {
        const auto ring = verify_center_relations(build_reflection({1.0, 0.7}), 200, 5);
        CHECK(ring.kind == RingKind::Reflection);
        CHECK(ring.passed());

        std::mt19937_64 rng(13);
        const auto report = verify_center_relations(testing::random_center(rng, 5, false), 50, 5);
        CHECK_FALSE(report.passed());
        REQUIRE(report.first_failure().has_value());
        CHECK(*report.first_failure() == "PT-symmetric parity exists");
    }
}
