#include "ptscatter/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ptscatter/errors.hpp"

namespace ptscatter {

std::size_t ScatteringCenter::index_of(std::string_view label) const {
    auto it = std::find(sites.begin(), sites.end(), label);
    if (it == sites.end()) {
        throw DomainError("unknown site '" + std::string(label) + "'");
    }
    return static_cast<std::size_t>(it - sites.begin());
}

cplx ScatteringCenter::potential(const std::string& label) const {
    auto it = onsite.find(label);
    return it == onsite.end() ? cplx{} : it->second;
}

WaveVector::WaveVector(double k) : k_(k) {
    if (!(k > 0.0 && k < kPi)) {
        std::ostringstream msg;
        msg << "wave vector k = " << k << " outside the open band interior (0, pi)";
        throw DomainError(msg.str());
    }
}

double WaveVector::group_velocity() const { return 2.0 * std::sin(k_); }

double wrap_phase(double angle) {
    double w = std::fmod(angle, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

double RingParameters::canonical_flux() const { return wrap_phase(flux); }

ParityMap ParityMap::from_swaps(const std::vector<std::string>& sites,
                                const std::vector<std::pair<std::string, std::string>>& swaps) {
    std::map<std::string, std::string> m;
    for (const auto& s : sites) m[s] = s;
    std::set<std::string> seen;
    for (const auto& [a, b] : swaps) {
        if (!m.count(a) || !m.count(b)) throw DomainError("parity swap references unknown site");
        if (!seen.insert(a).second || (a != b && !seen.insert(b).second)) {
            throw DomainError("site listed in more than one parity swap");
        }
        m[a] = b;
        m[b] = a;
    }
    return ParityMap(std::move(m));
}

ParityMap::ParityMap(std::map<std::string, std::string> mapping) : mapping_(std::move(mapping)) {
    for (const auto& [from, to] : mapping_) {
        auto back = mapping_.find(to);
        if (back == mapping_.end() || back->second != from) {
            throw DomainError("parity map is not an involution at site '" + from + "'");
        }
    }
}

const std::string& ParityMap::image(const std::string& site) const {
    auto it = mapping_.find(site);
    if (it == mapping_.end()) throw DomainError("parity map does not cover site '" + site + "'");
    return it->second;
}

bool ParityMap::is_identity() const {
    return std::all_of(mapping_.begin(), mapping_.end(),
                       [](const auto& kv) { return kv.first == kv.second; });
}

double dispersion(double k) { return dispersion(WaveVector(k)); }

double dispersion(const WaveVector& k) { return -2.0 * LeadModel::hopping * std::cos(k.value()); }

std::string_view to_string(DiagnosticKind kind) {
    switch (kind) {
    case DiagnosticKind::DuplicateAttachment: return "DuplicateAttachment";
    case DiagnosticKind::UnknownSite: return "UnknownSite";
    case DiagnosticKind::DuplicateSite: return "DuplicateSite";
    case DiagnosticKind::SelfLoop: return "SelfLoop";
    case DiagnosticKind::DuplicateEdge: return "DuplicateEdge";
    case DiagnosticKind::InvalidHopping: return "InvalidHopping";
    case DiagnosticKind::InvalidOnsite: return "InvalidOnsite";
    }
    return "Unknown";
}

std::vector<Diagnostic> validate_center(const ScatteringCenter& center) {
    std::vector<Diagnostic> out;
    auto report = [&out](DiagnosticKind kind, std::string msg) {
        out.push_back({kind, std::move(msg)});
    };

    std::set<std::string> known;
    for (const auto& s : center.sites) {
        if (!known.insert(s).second) report(DiagnosticKind::DuplicateSite, "site '" + s + "' listed twice");
    }

    if (center.attach_left == center.attach_right) {
        report(DiagnosticKind::DuplicateAttachment,
               "attach_left and attach_right are both '" + center.attach_left + "'");
    }
    for (const auto* attach : {&center.attach_left, &center.attach_right}) {
        if (!known.count(*attach)) {
            report(DiagnosticKind::UnknownSite, "attachment site '" + *attach + "' is not a centre site");
        }
    }

    for (const auto& [site, value] : center.onsite) {
        if (!known.count(site)) {
            report(DiagnosticKind::UnknownSite, "onsite term on unknown site '" + site + "'");
        }
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
            report(DiagnosticKind::InvalidOnsite, "onsite term on '" + site + "' is not finite");
        }
    }

    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& h : center.hoppings) {
        const std::string edge = "'" + h.from + "'-'" + h.to + "'";
        for (const auto* end : {&h.from, &h.to}) {
            if (!known.count(*end)) {
                report(DiagnosticKind::UnknownSite, "hopping " + edge + " references unknown site '" + *end + "'");
            }
        }
        if (h.from == h.to) {
            report(DiagnosticKind::SelfLoop, "hopping " + edge + " is a self-loop");
            continue;
        }
        auto key = std::minmax(h.from, h.to);
        if (!pairs.insert({key.first, key.second}).second) {
            report(DiagnosticKind::DuplicateEdge, "hopping " + edge + " duplicates an existing pair");
        }
        const double mag = std::abs(h.amplitude);
        if (!std::isfinite(mag) || mag == 0.0) {
            report(DiagnosticKind::InvalidHopping, "hopping " + edge + " must be finite and nonzero");
        }
    }
    return out;
}

void require_valid(const ScatteringCenter& center) {
    auto diags = validate_center(center);
    if (diags.empty()) return;
    std::string msg = "invalid scattering centre:";
    for (const auto& d : diags) {
        msg += " [";
        msg += to_string(d.kind);
        msg += "] " + d.message + ";";
    }
    throw DomainError(msg);
}

ScatteringCenter apply_gauge(const ScatteringCenter& center,
                             const std::map<std::string, double>& phases) {
    for (const auto& [site, theta] : phases) {
        if (site == center.attach_left || site == center.attach_right) {
            throw DomainError("gauge phase on attachment site '" + site + "' would alter lead matching");
        }
        center.index_of(site);
        (void)theta;
    }
    auto phase_of = [&phases](const std::string& s) {
        auto it = phases.find(s);
        return it == phases.end() ? 0.0 : it->second;
    };

    ScatteringCenter out = center;
    for (auto& h : out.hoppings) {
        const double shift = phase_of(h.from) - phase_of(h.to);
        if (shift != 0.0) h.amplitude *= std::polar(1.0, shift);
    }
    return out;
}

namespace {

// <to|H|from> for an existing edge.
cplx hop_element(const ScatteringCenter& c, const std::string& to, const std::string& from) {
    for (const auto& h : c.hoppings) {
        if (h.from == to && h.to == from) return h.amplitude;
        if (h.from == from && h.to == to) return std::conj(h.amplitude);
    }
    throw DomainError("no hopping between '" + from + "' and '" + to + "'");
}

} // namespace

double cycle_flux(const ScatteringCenter& center, std::span<const std::string> cycle) {
    if (cycle.size() < 3 || cycle.front() != cycle.back()) {
        throw DomainError("cycle must be a closed walk (first site == last site)");
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
        total += std::arg(-hop_element(center, cycle[i + 1], cycle[i]));
    }
    return wrap_phase(total);
}

Eigen::MatrixXcd hamiltonian_matrix(const ScatteringCenter& center) {
    const auto n = static_cast<Eigen::Index>(center.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [site, value] : center.onsite) {
        const auto i = static_cast<Eigen::Index>(center.index_of(site));
        h(i, i) += value;
    }
    for (const auto& hop : center.hoppings) {
        const auto a = static_cast<Eigen::Index>(center.index_of(hop.from));
        const auto b = static_cast<Eigen::Index>(center.index_of(hop.to));
        h(a, b) += hop.amplitude;
        h(b, a) += std::conj(hop.amplitude);
    }
    return h;
}

} // namespace ptscatter
