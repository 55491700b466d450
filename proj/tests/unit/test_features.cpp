#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "ptscatter/errors.hpp"
#include "ptscatter/features.hpp"
#include "ptscatter/solver.hpp"

using namespace ptscatter;

namespace {

std::vector<double> ks(const FeatureLocus& locus) {
    std::vector<double> out;
    for (const auto& p : locus.points) out.push_back(p.k);
    return out;
}

bool contains(const std::vector<double>& values, double x, double tol = 1e-9) {
    return std::any_of(values.begin(), values.end(), [&](double v) { return std::abs(v - x) < tol; });
}

const FeatureLocus& locus_of(const std::vector<FeatureLocus>& loci, FeatureKind kind) {
    for (const auto& l : loci) {
        if (l.kind == kind) return l;
    }
    throw std::runtime_error("missing locus");
}

} // namespace

TEST_SUITE("features") {
    TEST_CASE("axis ranges") {
        const AxisRange r{Axis::K, 0.1, 0.9, 5};
        CHECK(r.at(0) == 0.1);
        CHECK(r.at(4) == 0.9);
        CHECK(r.at(2) == doctest::Approx(0.5));
        CHECK(default_k_axis().count == kDefaultResolution);
        CHECK(default_k_axis().lo == kBandInset);
        CHECK(default_flux_axis().hi == kTwoPi);
        CHECK(parse_axis("phi") == Axis::Flux);
        CHECK(parse_axis("flux") == Axis::Flux);
        CHECK(parse_axis("gamma") == Axis::Gamma);
        CHECK_THROWS_AS(parse_axis("omega"), DomainError);
    }

    TEST_CASE("sweep layout and reciprocity") {
        const RhombicConfig base{RingKind::Axial, {0.0, 0.5}};
        const auto table = sweep(base, default_flux_axis(21), default_k_axis(31));
        REQUIRE(table.rows.size() == 21 * 31);
        CHECK(table.rows[0].flux == 0.0);
        CHECK(table.rows[30].k == doctest::Approx(kPi - kBandInset));
        CHECK(table.rows[31].flux == doctest::Approx(kTwoPi / 20));
        for (const auto& row : table.rows) {
            CHECK(row.gamma == 0.5);
            if (row.flags != CoefficientFlags::Ok) continue;
            CHECK(std::abs(row.r_left2 - row.r_right2) < 1e-9 * std::max(1.0, row.r_left2));
        }

        const auto refl = sweep({RingKind::Reflection, {0.0, 0.5}}, default_flux_axis(21), default_k_axis(31));
        for (const auto& row : refl.rows) {
            if (row.flags != CoefficientFlags::Ok) continue;
            CHECK(std::abs(row.t_left2 - row.t_right2) < 1e-9 * std::max(1.0, row.t_left2));
        }
    }

    TEST_CASE("Hermitian sweep is unitary") {
        const auto table = sweep({RingKind::Axial, {0.0, 0.0}}, default_flux_axis(15), default_k_axis(25),
                                 {SweepEngine::Solver, 2});
        for (const auto& row : table.rows) {
            CHECK(std::abs(row.r_left2 + row.t_left2 - 1.0) < 1e-10);
            CHECK(std::abs(row.r_right2 + row.t_right2 - 1.0) < 1e-10);
        }
    }

    TEST_CASE("flux reversal swaps left and right transmission") {
        const AxisRange flux{Axis::Flux, 0.0, kTwoPi, 41};
        const auto table = sweep({RingKind::Axial, {0.0, 0.5}}, flux, default_k_axis(21));
        const std::size_t nk = 21;
        for (std::size_t i = 0; i < flux.count; ++i) {
            for (std::size_t j = 0; j < nk; ++j) {
                const auto& a = table.rows[i * nk + j];
                const auto& b = table.rows[(flux.count - 1 - i) * nk + j];
                if (a.flags != CoefficientFlags::Ok || b.flags != CoefficientFlags::Ok) continue;
                CHECK(std::abs(a.t_left2 - b.t_right2) < 1e-9 * std::max(1.0, a.t_left2));
            }
        }
    }

    TEST_CASE("sweep engines agree and threads do not change results") {
        const RhombicConfig base{RingKind::Reflection, {0.0, 0.8}};
        const AxisRange gamma{Axis::Gamma, -1.0, 1.0, 9};
        const auto closed = sweep(base, gamma, default_k_axis(13), {SweepEngine::ClosedForm, 1});
        const auto solver = sweep(base, gamma, default_k_axis(13), {SweepEngine::Solver, 3});
        REQUIRE(closed.rows.size() == solver.rows.size());
        for (std::size_t i = 0; i < closed.rows.size(); ++i) {
            const double scale = std::max(1.0, closed.rows[i].t_left2);
            CHECK(std::abs(closed.rows[i].t_left2 - solver.rows[i].t_left2) < 1e-9 * scale);
            CHECK(std::abs(closed.rows[i].r_right2 - solver.rows[i].r_right2) < 1e-9 * scale);
        }
        std::ostringstream one, four;
        write_csv(sweep(base, gamma, default_k_axis(13), {SweepEngine::ClosedForm, 1}), one);
        write_csv(sweep(base, gamma, default_k_axis(13), {SweepEngine::ClosedForm, 4}), four);
        CHECK(one.str() == four.str());
    }

    TEST_CASE("CSV and JSON output") {
        const auto table = sweep({RingKind::Axial, {kPi / 2, 0.5}}, default_flux_axis(3), default_k_axis(4));
        std::ostringstream csv;
        write_csv(table, csv);
        std::istringstream lines(csv.str());
        std::string line;
        std::getline(lines, line);
        CHECK(line == "phi,gamma,k,rL2,rR2,tL2,tR2,flags");
        int count = 0;
        while (std::getline(lines, line)) {
            ++count;
            CHECK(std::count(line.begin(), line.end(), ',') == 7);
        }
        CHECK(count == 12);

        std::ostringstream json;
        write_json(table, json);
        const auto doc = nlohmann::json::parse(json.str());
        CHECK(doc["rows"].size() == 12);
        CHECK(doc["axes"].size() == 2);
    }

    TEST_CASE("sweep errors") {
        const RhombicConfig base{RingKind::Axial, {0.0, 0.5}};
        CHECK_THROWS_AS(sweep(base, default_k_axis(5), default_k_axis(5)), DomainError);
        CHECK_THROWS_AS(sweep(base, default_flux_axis(1), default_k_axis(5)), DomainError);
        CHECK_THROWS_AS(sweep(base, default_flux_axis(5), AxisRange{Axis::K, 0.0, 1.0, 5}), DomainError);
        CHECK_THROWS_AS(sweep(base, default_flux_axis(5), AxisRange{Axis::K, 0.1, 3.2, 5}), DomainError);
    }

    TEST_CASE("centre sweeps report NaN ring parameters") {
        const auto table = sweep(testing::two_site_bond(), default_k_axis(11));
        REQUIRE(table.rows.size() == 11);
        for (const auto& row : table.rows) {
            CHECK(std::isnan(row.flux));
            CHECK(std::isnan(row.gamma));
            CHECK(row.t_left2 == doctest::Approx(1.0));
        }
    }

    TEST_CASE("axial transmission zeros") {
        const auto loci = find_transmission_zeros({RingKind::Axial, {kPi / 2, 0.5}});
        const auto left = ks(locus_of(loci, FeatureKind::TransmissionZeroL));
        const auto right = ks(locus_of(loci, FeatureKind::TransmissionZeroR));
        REQUIRE(left.size() == 1);
        REQUIRE(right.size() == 1);
        CHECK(left[0] == doctest::Approx(std::acos(0.25)).epsilon(1e-12));
        CHECK(right[0] == doctest::Approx(std::acos(-0.25)).epsilon(1e-12));
        for (const auto& l : loci) {
            for (const auto& p : l.points) CHECK(p.check < kZeroThreshold);
        }
    }

    TEST_CASE("reflection zeros of the reflection ring") {
        const auto loci = find_reflection_zeros({RingKind::Reflection, {kPi / 2, 0.5}});
        const auto right = ks(locus_of(loci, FeatureKind::ReflectionZeroR));
        REQUIRE(right.size() == 2);
        CHECK(right[0] / kPi == doctest::Approx(0.30957).epsilon(1e-4));
        CHECK(right[1] / kPi == doctest::Approx(0.69043).epsilon(1e-4));
        for (double k : right) {
            const auto o = testing::oracle_for(build_reflection({kPi / 2, 0.5}), k);
            CHECK(std::norm(o.r_right) < 1e-16);
            CHECK(std::norm(o.r_left) == doctest::Approx(0.63439).epsilon(1e-4));
        }
    }

    TEST_CASE("zeros are symmetric under k -> pi - k") {
        // Within a channel for the reflection ring; the axial ring maps
        // left-incidence zeros onto right-incidence ones.
        for (auto kind : {RingKind::Axial, RingKind::Reflection}) {
            for (double flux : {0.4, kPi / 2, 2.5}) {
                const RhombicConfig cfg{kind, {flux, 0.7}};
                for (const auto& loci : {find_transmission_zeros(cfg), find_reflection_zeros(cfg)}) {
                    std::vector<double> all;
                    for (const auto& l : loci) {
                        const auto v = ks(l);
                        all.insert(all.end(), v.begin(), v.end());
                        if (kind == RingKind::Reflection) {
                            for (double k : v) CHECK(contains(v, kPi - k, 1e-8));
                        }
                    }
                    for (double k : all) CHECK(contains(all, kPi - k, 1e-8));
                }
            }
        }
    }

    TEST_CASE("numeric fallback at degenerate fluxes") {
        // At Phi = pi the closed-form factorisation degenerates; transmission
        // has no zero for gamma below the singular threshold.
        const auto loci = find_transmission_zeros({RingKind::Axial, {kPi, 0.5}});
        CHECK(locus_of(loci, FeatureKind::TransmissionZeroL).points.empty());

        const auto numeric = find_zeros_numeric(build_axial({kPi / 2, 0.5}), Channel::TransmissionLeft, 801);
        REQUIRE(numeric.points.size() == 1);
        CHECK(numeric.points[0].k == doctest::Approx(std::acos(0.25)).epsilon(1e-9));
        CHECK_FALSE(numeric.vanishes_identically);

        // A fully reflecting dangling centre never transmits.
        ScatteringCenter blocked;
        blocked.sites = {"L", "X", "R"};
        blocked.hoppings = {{"L", "X", cplx(-1.0, 0.0)}};
        blocked.attach_left = "L";
        blocked.attach_right = "R";
        CHECK(find_zeros_numeric(blocked, Channel::TransmissionLeft, 201).vanishes_identically);
    }

    TEST_CASE("spectral singularities at fixed flux and k") {
        SingularityScan scan;
        scan.flux = kPi / 2;
        scan.k = kPi / 2;
        const auto locus = find_spectral_singularities(RingKind::Axial, scan);
        CHECK(locus.kind == FeatureKind::SpectralSingularity);
        REQUIRE(locus.points.size() == 2);
        CHECK(locus.points[0].gamma == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-10));
        CHECK(locus.points[1].gamma == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

        scan.flux = kPi;
        scan.k = kPi / 3;
        const auto second = find_spectral_singularities(RingKind::Axial, scan);
        REQUIRE(second.points.size() == 2);
        CHECK(std::abs(second.points[1].gamma) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
        for (const auto& p : second.points) {
            CHECK(p.check < kSingularityAccept);
            const auto m = direct_transfer_matrix(build_axial({p.flux, p.gamma}), WaveVector(p.k));
            CHECK(std::abs(m.m22) < kTransferCrossCheck);
        }
    }

    TEST_CASE("singularity curves and the reflection ring") {
        SingularityScan scan;
        scan.k = kPi / 2;
        const auto curve = find_spectral_singularities(RingKind::Axial, scan);
        CHECK(curve.points.size() > 10);
        for (const auto& p : curve.points) {
            CHECK(std::abs(ring_denominator(RingKind::Axial, {p.flux, p.gamma}, p.k).value) < kSingularityAccept);
        }
        const auto none = find_spectral_singularities(RingKind::Reflection, scan);
        CHECK(none.points.empty());
        CHECK(none.empty_by_theorem);
    }
}
