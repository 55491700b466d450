#include "ptscatter/center_io.hpp"

#include <fstream>

#include "ptscatter/errors.hpp"

namespace ptscatter {

namespace {

using nlohmann::json;

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw DomainError(where + ": expected [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

const json& require(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw DomainError(std::string("centre document missing key '") + key + "'");
    return *it;
}

std::string require_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw DomainError(where + ": expected a site label string");
    return j.get<std::string>();
}

} // namespace

json center_to_json(const ScatteringCenter& center) {
    json onsite = json::object();
    for (const auto& [site, value] : center.onsite) onsite[site] = complex_to_json(value);

    json hoppings = json::array();
    for (const auto& h : center.hoppings) {
        hoppings.push_back(json::array({h.from, h.to, complex_to_json(h.amplitude)}));
    }
    return json{{"sites", center.sites},
                {"onsite", std::move(onsite)},
                {"hoppings", std::move(hoppings)},
                {"attach_left", center.attach_left},
                {"attach_right", center.attach_right}};
}

ScatteringCenter center_from_json(const json& doc) {
    if (!doc.is_object()) throw DomainError("centre document must be a JSON object");
    ScatteringCenter c;

    const auto& sites = require(doc, "sites");
    if (!sites.is_array()) throw DomainError("'sites' must be an array");
    for (const auto& s : sites) c.sites.push_back(require_string(s, "sites"));

    if (auto it = doc.find("onsite"); it != doc.end()) {
        if (!it->is_object()) throw DomainError("'onsite' must map site labels to [re, im]");
        for (const auto& [site, value] : it->items()) {
            c.onsite[site] = complex_from_json(value, "onsite." + site);
        }
    }

    const auto& hoppings = require(doc, "hoppings");
    if (!hoppings.is_array()) throw DomainError("'hoppings' must be an array");
    for (const auto& h : hoppings) {
        if (!h.is_array() || h.size() != 3) throw DomainError("hopping must be [from, to, [re, im]]");
        c.hoppings.push_back({require_string(h[0], "hopping.from"), require_string(h[1], "hopping.to"),
                              complex_from_json(h[2], "hopping amplitude")});
    }

    c.attach_left = require_string(require(doc, "attach_left"), "attach_left");
    c.attach_right = require_string(require(doc, "attach_right"), "attach_right");
    return c;
}

ScatteringCenter load_center(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open centre file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw DomainError("centre file " + path.string() + ": " + e.what());
    }
    return center_from_json(doc);
}

void save_center(const ScatteringCenter& center, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write centre file " + path.string());
    out << center_to_json(center).dump(2) << '\n';
}

} // namespace ptscatter
