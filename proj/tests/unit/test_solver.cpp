#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "ptscatter/errors.hpp"
#include "ptscatter/rhombic.hpp"
#include "ptscatter/solver.hpp"

using namespace ptscatter;

TEST_SUITE("solver") {
    TEST_CASE("left incidence at the axial transmission zero") {
        const auto sol = solve_scattering(build_axial({kPi / 2, 0.5}), WaveVector(std::acos(0.25)), Side::Left);
        CHECK(std::norm(sol.transmission) < 1e-24);
        CHECK(std::norm(sol.reflection) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(sol.residual < 1e-9);
        CHECK(sol.flags == CoefficientFlags::Ok);
        CHECK(sol.state.internal.size() == 4);
    }

    TEST_CASE("bound state in the continuum is a degenerate point") {
        // Reflection ring at Phi = 0, k = pi/2 and the Hermitian ring at the
        // same point both host an A/B-antisymmetric state decoupled from the leads.
        const auto refl = build_reflection({0.0, 0.5});
        CHECK_THROWS_AS(solve_scattering(refl, WaveVector(kPi / 2), Side::Left), DegeneratePoint);
        const auto sc = coefficients_with_limits(refl, WaveVector(kPi / 2));
        CHECK(has_flag(sc.flags, CoefficientFlags::LimitEvaluated));
        CHECK(std::abs(sc.r_left) < 1e-9);
        CHECK(std::abs(sc.r_right) < 1e-9);
        CHECK(std::abs(sc.t_left - 1.0) < 1e-9);
        CHECK(std::abs(sc.t_right - 1.0) < 1e-9);

        const auto plain = build_axial({0.0, 0.0});
        CHECK_THROWS_AS(full_coefficients(plain, WaveVector(kPi / 2)), DegeneratePoint);
        const auto lim = coefficients_with_limits(plain, WaveVector(kPi / 2));
        CHECK(std::abs(lim.r_left) < 1e-9);
        CHECK(std::abs(lim.t_left - 1.0) < 1e-9);
    }

    TEST_CASE("bare bond between the leads is transparent") {
        const auto sc = full_coefficients(testing::two_site_bond(), WaveVector(kPi / 2));
        CHECK(std::abs(sc.r_left) < 1e-14);
        CHECK(std::abs(sc.t_left) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(sc.t_right) == doctest::Approx(1.0).epsilon(1e-14));
        // The bond replaces one chain site, so t picks up the phase e^{-ik}.
        for (double k = 0.1; k < kPi; k += 0.3) {
            const auto s = full_coefficients(testing::two_site_bond(), WaveVector(k));
            CHECK(std::abs(s.r_left) < 1e-13);
            CHECK(std::abs(s.t_left - std::polar(1.0, -k)) < 1e-13);
            CHECK(std::abs(s.t_right - std::polar(1.0, -k)) < 1e-13);
        }
        // One site between the attachments restores the perfect chain.
        ScatteringCenter chain;
        chain.sites = {"L", "0", "R"};
        chain.hoppings = {{"L", "0", cplx(-1.0, 0.0)}, {"0", "R", cplx(-1.0, 0.0)}};
        chain.attach_left = "L";
        chain.attach_right = "R";
        for (double k : {kPi / 2, 0.3, 2.9}) {
            const auto s = full_coefficients(chain, WaveVector(k));
            CHECK(std::abs(s.r_left) < 1e-14);
            CHECK(std::abs(s.t_left - 1.0) < 1e-14);
            CHECK(std::abs(s.t_right - 1.0) < 1e-14);
        }

        ScatteringCenter single;
        single.sites = {"0"};
        single.attach_left = single.attach_right = "0";
        CHECK_THROWS_AS(full_coefficients(single, WaveVector(1.0)), DomainError);
    }

    TEST_CASE("full_coefficients examples") {
        const auto axial = full_coefficients(build_axial({kPi, 0.5}), WaveVector(kPi / 2));
        CHECK(axial.max_difference(axial_coefficients({kPi, 0.5}, WaveVector(kPi / 2))) < 1e-10);

        const auto refl = full_coefficients(build_reflection({kPi / 2, 0.5}), WaveVector(kPi / 3));
        CHECK(std::abs(refl.t_left - refl.t_right) < 1e-12);

        std::mt19937_64 rng(17);
        for (int n = 4; n <= 8; ++n) {
            const auto c = testing::random_center(rng, n, true);
            const auto sc = full_coefficients(c, WaveVector(0.77));
            CHECK(std::abs(sc.reflectance_left() + sc.transmittance_left() - 1.0) < 1e-12);
            CHECK(std::abs(sc.reflectance_right() + sc.transmittance_right() - 1.0) < 1e-12);
        }
    }

    TEST_CASE("solver agrees with the Green-function oracle on random centres") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> kd(0.02, kPi - 0.02);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const auto c = testing::random_center(rng, 4 + i % 5, false);
            const double k = kd(rng);
            const auto sc = full_coefficients(c, WaveVector(k));
            const auto o = testing::oracle_for(c, k);
            worst = std::max(worst, testing::max_diff(o, sc) / std::max(1.0, std::abs(o.r_left)));
        }
        CHECK(worst < 1e-10);
    }

    TEST_CASE("analytic continuation k -> -k") {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> flux(0.0, kTwoPi), gamma(-2.0, 2.0), kd(0.05, kPi - 0.05);
        for (int i = 0; i < 100; ++i) {
            const RingParameters p{flux(rng), gamma(rng)};
            const WaveVector k(kd(rng));
            const auto ax = build_axial(p);
            const auto fwd = full_coefficients(ax, k);
            const auto rev = full_coefficients(ax, k, Continuation::Reversed);
            if (std::abs(fwd.r_left) > 1e2 || std::abs(fwd.t_left) > 1e2) continue;
            const double s = std::max(1.0, std::abs(fwd.r_left));
            CHECK(std::abs(rev.r_left - std::conj(fwd.r_left)) < 1e-10 * s);
            CHECK(std::abs(rev.t_left - std::conj(fwd.t_left)) < 1e-10 * s);
            CHECK(testing::max_diff(testing::oracle_for(ax, k.value(), true), rev) < 1e-10 * s);

            const auto re = build_reflection(p);
            const auto rf = full_coefficients(re, k);
            const auto rr = full_coefficients(re, k, Continuation::Reversed);
            const double t = std::max(1.0, std::abs(rf.r_left));
            CHECK(std::abs(rr.r_left - std::conj(rf.r_right)) < 1e-10 * t);
            CHECK(std::abs(rr.t_left - std::conj(rf.t_right)) < 1e-10 * t);
        }
    }

    TEST_CASE("transfer matrix examples") {
        ScatteringCoefficients clear;
        clear.t_left = clear.t_right = 1.0;
        const auto id = transfer_matrix(clear);
        CHECK(std::abs(id.m11 - 1.0) < 1e-15);
        CHECK(std::abs(id.m12) < 1e-15);
        CHECK(std::abs(id.m21) < 1e-15);
        CHECK(std::abs(id.m22 - 1.0) < 1e-15);

        const auto refl = reflection_coefficients({kPi / 2, 0.5}, WaveVector(kPi / 3));
        CHECK(std::abs(transfer_matrix(refl).determinant() - 1.0) < 1e-12);

        double previous = 1e300;
        for (double g : {1.9, 1.99, 1.999, 1.9999}) {
            const auto m = direct_transfer_matrix(build_axial({kPi, g}), WaveVector(kPi / 2));
            CHECK(std::abs(m.m22) < previous);
            previous = std::abs(m.m22);
        }
        CHECK(previous < 1e-3);
    }

    TEST_CASE("transfer matrix round trip and determinant") {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> flux(0.0, kTwoPi), gamma(-2.0, 2.0), kd(0.05, kPi - 0.05);
        for (int i = 0; i < 200; ++i) {
            const RingParameters p{flux(rng), gamma(rng)};
            const WaveVector k(kd(rng));
            const auto sc = closed_form({RingKind::Axial, p}, k);
            if (std::abs(sc.t_right) < 1e-3 || std::abs(sc.r_left) > 1e2) continue;
            const auto m = transfer_matrix(sc);
            const auto back = coefficients_from_transfer(m, k.value());
            const double s = std::max({1.0, std::abs(sc.r_left), std::abs(sc.t_left), std::abs(sc.t_right)});
            CHECK(back.max_difference(sc) < 1e-12 * s * s);
            CHECK(std::abs(m.determinant() - sc.t_left / sc.t_right) < 1e-10 * s * s);
            const auto direct = direct_transfer_matrix(build_axial(p), k);
            CHECK(std::abs(direct.m22 - m.m22) < 1e-9 * std::max(1.0, std::abs(m.m22)));
            CHECK(std::abs(direct.m11 - m.m11) < 1e-9 * std::max(1.0, std::abs(m.m11)));
        }
    }

    TEST_CASE("transfer matrix errors") {
        const auto zero = axial_coefficients({kPi / 2, 0.5}, WaveVector(std::acos(-0.25)));
        CHECK_THROWS_AS(transfer_matrix(zero), NotInvertible);
        TransferMatrix m{1.0, 0.0, 0.0, 0.0};
        CHECK_THROWS_AS(coefficients_from_transfer(m, 1.0), SpectralSingularity);
    }

    TEST_CASE("residual behaviour") {
        const auto c = build_axial({kPi / 2, 0.5});
        const WaveVector k(1.0);
        const auto sol = solve_scattering(c, k, Side::Right);
        CHECK(sol.residual < 1e-9);
        CHECK(residual(c, k, sol.state) == doctest::Approx(sol.residual));

        ScatteringState zero;
        for (const auto& s : c.sites) zero.internal[s] = 0.0;
        CHECK(residual(c, k, zero) == 0.0);

        ScatteringState perturbed = sol.state;
        perturbed.internal["A"] += 1e-3;
        const double r = residual(c, k, perturbed);
        CHECK(r > 1e-4);
        CHECK(r < 1e-2);

        ScatteringState partial;
        CHECK_THROWS_AS(residual(c, k, partial), DomainError);
    }

    TEST_CASE("singular states") {
        const double k1 = kPi / 3;
        const auto emitter = build_axial({kPi, 2.0 * std::sin(k1)});
        const auto em = singular_state(emitter, WaveVector(k1), SingularBranch::Emission);
        CHECK(em.residual < 1e-8);
        CHECK(std::abs(em.state.left_minus - 1.0) < 1e-12);
        CHECK(std::abs(em.state.left_plus) == 0.0);
        CHECK(std::abs(em.state.right_minus) == 0.0);
        CHECK(singularity_measure(emitter, WaveVector(k1)) < 1e-8);

        const auto absorber = build_axial({kPi / 2, std::sqrt(2.0)});
        const auto ab = singular_state(absorber, WaveVector(kPi / 2), SingularBranch::Absorption);
        CHECK(ab.residual < 1e-8);
        CHECK(std::abs(ab.state.left_plus - 1.0) < 1e-12);
        CHECK(std::abs(ab.state.left_minus) == 0.0);

        // Both branches exist at the same point; the sign of each is reported
        // independently.
        for (auto branch : {SingularBranch::Emission, SingularBranch::Absorption}) {
            const auto s = singular_state(emitter, WaveVector(k1), branch);
            CHECK(s.residual < 1e-8);
            CHECK((s.sign == 1 || s.sign == -1 || s.sign == 0));
            MESSAGE((branch == SingularBranch::Emission ? "emission" : "absorption") << " sign " << s.sign);
        }

        CHECK_THROWS_AS(singular_state(build_axial({kPi / 2, 0.5}), WaveVector(1.0), SingularBranch::Emission),
                        DomainError);
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> flux(0.0, kTwoPi), gamma(-3.0, 3.0), kd(0.05, kPi - 0.05);
        for (int i = 0; i < 20; ++i) {
            const auto refl = build_reflection({flux(rng), gamma(rng)});
            CHECK_THROWS_AS(singular_state(refl, WaveVector(kd(rng)), SingularBranch::Emission), DomainError);
        }
    }

    TEST_CASE("near-singular systems are flagged, not thrown") {
        const auto c = build_axial({kPi / 2, std::sqrt(2.0)});
        const auto sc = full_coefficients(c, WaveVector(kPi / 2));
        CHECK(has_flag(sc.flags, CoefficientFlags::NearSingular));
    }
}
