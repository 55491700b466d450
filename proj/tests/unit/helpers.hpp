#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "ptscatter/lattice.hpp"
#include "ptscatter/rhombic.hpp"

#include "../oracle/green_function.hpp"

namespace testing {

using ptscatter::cplx;
using ptscatter::kPi;

inline double circular_distance(double a, double b) {
    const double d = std::fmod(std::abs(a - b), ptscatter::kTwoPi);
    return std::min(d, ptscatter::kTwoPi - d);
}

/// Random connected centre with `n` sites: a ring through all sites plus a
/// few chords. `hermitian` keeps onsite terms real.
inline ptscatter::ScatteringCenter random_center(std::mt19937_64& rng, int n, bool hermitian,
                                                 bool unit_hoppings = false) {
    std::uniform_real_distribution<double> phase(0.0, ptscatter::kTwoPi);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::uniform_real_distribution<double> pot(-1.0, 1.0);
    ptscatter::ScatteringCenter c;
    for (int i = 0; i < n; ++i) c.sites.push_back("s" + std::to_string(i));
    auto amp = [&] { return std::polar(unit_hoppings ? 1.0 : mag(rng), phase(rng)); };
    for (int i = 0; i < n; ++i) c.hoppings.push_back({c.sites[i], c.sites[(i + 1) % n], amp()});
    for (int i = 0; i + 2 < n; i += 2) {
        if (n > 4 && (i + 3) % n != i) c.hoppings.push_back({c.sites[i], c.sites[(i + 3) % n], amp()});
    }
    for (const auto& s : c.sites) {
        c.onsite[s] = hermitian ? cplx(pot(rng), 0.0) : cplx(pot(rng), pot(rng));
    }
    c.attach_left = c.sites[0];
    c.attach_right = c.sites[static_cast<std::size_t>(n / 2)];
    return c;
}

inline oracle::Amplitudes oracle_for(const ptscatter::ScatteringCenter& c, double k, bool reversed = false) {
    const cplx z = std::polar(1.0, reversed ? -k : k);
    return oracle::green_amplitudes(ptscatter::hamiltonian_matrix(c),
                                    static_cast<Eigen::Index>(c.index_of(c.attach_left)),
                                    static_cast<Eigen::Index>(c.index_of(c.attach_right)), z);
}

inline double max_diff(const oracle::Amplitudes& a, const ptscatter::ScatteringCoefficients& b) {
    return std::max({std::abs(a.r_left - b.r_left), std::abs(a.t_left - b.t_left), std::abs(a.r_right - b.r_right),
                     std::abs(a.t_right - b.t_right)});
}

inline ptscatter::ScatteringCenter two_site_bond() {
    ptscatter::ScatteringCenter c;
    c.sites = {"L", "R"};
    c.hoppings = {{"L", "R", cplx(-1.0, 0.0)}};
    c.attach_left = "L";
    c.attach_right = "R";
    return c;
}

} // namespace testing
