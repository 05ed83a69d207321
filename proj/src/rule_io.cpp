#include "tilepack/errors.hpp"
#include "tilepack/substitution.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef TILEPACK_DEFAULT_DATA_DIR
#define TILEPACK_DEFAULT_DATA_DIR "data"
#endif

namespace tilepack {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const json& require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object()) throw ParseError("load_rule", where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("load_rule", where + "." + key, "missing field");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError("load_rule", where, "expected a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ParseError("load_rule", where, "expected an integer");
    return v.get<int>();
}

Point pair(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) throw ParseError("load_rule", where, "expected [x, y]");
    return {number(v[0], where + "[0]"), number(v[1], where + "[1]")};
}

Polygon points(const json& v, const std::string& where) {
    if (!v.is_array()) throw ParseError("load_rule", where, "expected a list of [x, y]");
    Polygon out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(pair(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

json point_json(Point z) { return json::array({z.real(), z.imag()}); }

} // namespace

SubstitutionRule load_rule(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw ParseError("load_rule", "<document>", e.what());
    }
    SubstitutionRule rule;
    const json& name = require(doc, "name", "rule");
    if (!name.is_string()) throw ParseError("load_rule", "rule.name", "expected a string");
    rule.name = name.get<std::string>();
    if (auto it = doc.find("description"); it != doc.end() && it->is_string()) rule.description = it->get<std::string>();

    const json& protos = require(doc, "prototiles", "rule");
    if (!protos.is_array() || protos.empty())
        throw ParseError("load_rule", "prototiles", "expected a non-empty list");
    for (std::size_t i = 0; i < protos.size(); ++i) {
        const std::string where = "prototiles[" + std::to_string(i) + "]";
        const json& p = protos[i];
        Prototile t;
        t.id = integer(require(p, "id", where), where + ".id");
        if (rule.type_of_id(t.id) >= 0) throw ParseError("load_rule", where + ".id", "duplicate id");
        if (auto it = p.find("label"); it != p.end()) {
            if (!it->is_string()) throw ParseError("load_rule", where + ".label", "expected a string");
            t.label = it->get<std::string>();
        } else {
            t.label = "p" + std::to_string(t.id);
        }
        t.vertices = points(require(p, "vertices", where), where + ".vertices");
        const json& base = require(p, "base_edge", where);
        if (!base.is_array() || base.size() != 2) throw ParseError("load_rule", where + ".base_edge", "expected [i, j]");
        for (int k = 0; k < 2; ++k) {
            t.base_edge[k] = integer(base[k], where + ".base_edge[" + std::to_string(k) + "]");
            if (t.base_edge[k] < 0 || t.base_edge[k] >= static_cast<int>(t.vertices.size()))
                throw ParseError("load_rule", where + ".base_edge[" + std::to_string(k) + "]", "index out of range");
        }
        if (auto it = p.find("combinatorial_corners"); it != p.end())
            t.corners = points(*it, where + ".combinatorial_corners");
        else
            t.corners = t.vertices;
        rule.prototiles.push_back(std::move(t));
    }

    const json& kids = require(doc, "children", "rule");
    if (!kids.is_array() || kids.size() != protos.size())
        throw ParseError("load_rule", "children", "expected one list per prototile");
    for (std::size_t i = 0; i < kids.size(); ++i) {
        const std::string where = "children[" + std::to_string(i) + "]";
        if (!kids[i].is_array()) throw ParseError("load_rule", where, "expected a list");
        std::vector<ChildPlacement> list;
        for (std::size_t c = 0; c < kids[i].size(); ++c) {
            const std::string w = where + "[" + std::to_string(c) + "]";
            const json& k = kids[i][c];
            ChildPlacement cp;
            const int id = integer(require(k, "prototile", w), w + ".prototile");
            cp.type = rule.type_of_id(id);
            if (cp.type < 0) throw ParseError("load_rule", w + ".prototile", "unknown prototile id " + std::to_string(id));
            cp.map.factor = pair(require(k, "factor", w), w + ".factor");
            cp.map.offset = pair(require(k, "offset", w), w + ".offset");
            if (cp.map.factor == Point{0.0, 0.0}) throw ParseError("load_rule", w + ".factor", "factor must be nonzero");
            list.push_back(cp);
        }
        rule.children.push_back(std::move(list));
    }
    return rule;
}

SubstitutionRule load_rule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("substitution-rules", "load_rule", "cannot open rule file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_rule(ss.str());
}

std::string rule_to_json(const SubstitutionRule& rule) {
    json doc;
    doc["name"] = rule.name;
    if (!rule.description.empty()) doc["description"] = rule.description;
    doc["prototiles"] = json::array();
    doc["children"] = json::array();
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const Prototile& p = rule.prototiles[i];
        json pj;
        pj["id"] = p.id;
        pj["label"] = p.label;
        pj["vertices"] = json::array();
        for (Point z : p.vertices) pj["vertices"].push_back(point_json(z));
        pj["base_edge"] = {p.base_edge[0], p.base_edge[1]};
        pj["combinatorial_corners"] = json::array();
        for (Point z : p.corners) pj["combinatorial_corners"].push_back(point_json(z));
        doc["prototiles"].push_back(pj);
        json kids = json::array();
        for (const ChildPlacement& c : rule.children[i])
            kids.push_back({{"prototile", rule.prototiles[c.type].id},
                            {"factor", point_json(c.map.factor)},
                            {"offset", point_json(c.map.offset)}});
        doc["children"].push_back(kids);
    }
    return doc.dump(2) + "\n";
}

std::string data_dir() {
    if (const char* env = std::getenv("TILEPACK_DATA_DIR"); env && *env) return env;
    return TILEPACK_DEFAULT_DATA_DIR;
}

std::vector<std::string> builtin_rule_names() {
    std::vector<std::string> names;
    const fs::path dir = fs::path(data_dir()) / "rules";
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            names.push_back(entry.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

SubstitutionRule builtin_rule(const std::string& name) {
    const fs::path file = fs::path(data_dir()) / "rules" / (name + ".json");
    if (!fs::exists(file))
        throw Error("substitution-rules", "load_rule",
                    "no built-in rule '" + name + "' in " + (fs::path(data_dir()) / "rules").string());
    return load_rule_file(file.string());
}

SubstitutionRule resolve_rule(const std::string& name_or_path) {
    const fs::path p(name_or_path);
    if (p.has_extension() || name_or_path.find('/') != std::string::npos) return load_rule_file(name_or_path);
    return builtin_rule(name_or_path);
}

} // namespace tilepack
