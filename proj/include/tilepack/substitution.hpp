#pragma once

#include "tilepack/geometry.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tilepack {

// z -> factor * z + offset. Orientation-preserving only; mirror images are
// separate prototiles.
struct SimilarityMap {
    Point factor{1.0, 0.0};
    Point offset{0.0, 0.0};

    Point operator()(Point z) const { return factor * z + offset; }
    SimilarityMap inverse() const { return {1.0 / factor, -offset / factor}; }
    double scale() const { return std::abs(factor); }
    bool is_congruence(double tol = 1e-7) const { return std::abs(std::abs(factor) - 1.0) <= tol; }
    bool linear_part_is_pm_identity(double tol = 1e-7) const {
        return std::abs(factor - 1.0) <= tol || std::abs(factor + 1.0) <= tol;
    }
};

// outer(inner(z))
inline SimilarityMap compose(const SimilarityMap& outer, const SimilarityMap& inner) {
    return {outer.factor * inner.factor, outer.factor * inner.offset + outer.offset};
}

struct Prototile {
    int id = 0;
    std::string label;
    Polygon vertices;
    std::array<int, 2> base_edge{0, 1};
    Polygon corners;  // combinatorial corners, CCW, superset of vertices

    int side_count() const { return static_cast<int>(corners.size()); }
    // Positions of the base-edge endpoints within `corners` (-1 if missing).
    std::array<int, 2> base_corner_indices(double eps = 1e-9) const;
    double area() const { return tilepack::area(vertices); }
};

struct ChildPlacement {
    int type = 0;  // index into SubstitutionRule::prototiles
    SimilarityMap map;
};

struct SubstitutionRule {
    std::string name;
    std::string description;
    std::vector<Prototile> prototiles;
    std::vector<std::vector<ChildPlacement>> children;

    std::size_t size() const { return prototiles.size(); }
    int type_of_id(int id) const;  // -1 if absent
    int type_of_label(std::string_view label) const;
};

struct LineageNode {
    int parent = -1;
    int child_index = -1;  // position among the parent's children
    int level = 0;
    int type = 0;
    SimilarityMap map;
    std::vector<int> children;
};

struct PlacedTile {
    int type = 0;
    SimilarityMap map;
    int node = -1;  // lineage node of this tile
};

struct Patch {
    std::vector<PlacedTile> tiles;
    std::vector<LineageNode> lineage;
    int level = 0;

    static Patch single(const SubstitutionRule& rule, int type, const SimilarityMap& map = {});

    // Child indices from the lineage root down to `node`.
    std::vector<int> lineage_path(int node) const;
    bool descends_from(int node, int ancestor) const;
    int ancestor_at_level(int node, int level) const;
    std::vector<int> nodes_at_level(int level) const;
    // Current tiles descending from `node`, in tile order.
    std::vector<int> descendant_tiles(int node) const;
};

Polygon placed_polygon(const SubstitutionRule& rule, int type, const SimilarityMap& map);
Polygon placed_corners(const SubstitutionRule& rule, int type, const SimilarityMap& map);
inline Polygon tile_polygon(const SubstitutionRule& r, const PlacedTile& t) { return placed_polygon(r, t.type, t.map); }
inline Polygon tile_corners(const SubstitutionRule& r, const PlacedTile& t) { return placed_corners(r, t.type, t.map); }

Patch subdivide_patch(const Patch& patch, const SubstitutionRule& rule);
Patch subdivide_patch(const Patch& patch, const SubstitutionRule& rule, int times);

struct PrototileReport {
    int type = 0;
    double area_residual = 0.0;
    std::vector<std::string> containment;
    std::vector<std::string> overlap;
    std::vector<std::string> similarity;
    std::vector<std::string> corners;
    std::vector<std::string> prototile;  // invariant violations of the prototile itself

    bool passed(double tol) const;
};

struct ValidationReport {
    double tol = 1e-9;
    std::vector<PrototileReport> prototiles;

    bool passed() const;
    std::string summary(const SubstitutionRule& rule) const;
};

ValidationReport validate_rule(const SubstitutionRule& rule, double tol = 1e-9);

struct IncidenceMatrix {
    std::vector<std::vector<long long>> entries;  // (i, j): children of i with type j
    bool primitive = false;
    int exponent = -1;  // smallest n with M^n > 0, -1 if none up to q^2
};

IncidenceMatrix incidence_matrix(const SubstitutionRule& rule);

// Tile count of tau^n applied to a single tile of type `type`.
long long tile_count(const SubstitutionRule& rule, int type, int n);

struct ConfigurationC {
    int host = 0;   // prototile type hosting the configuration
    int depth = 0;
    int type = 0;   // common prototile type of p and q
    std::vector<int> path_p;
    std::vector<int> path_q;
    SimilarityMap relation;  // maps tile p onto tile q

    double rotation_angle() const { return std::arg(relation.factor); }
};

std::optional<ConfigurationC> find_special_configuration(const SubstitutionRule& rule, int max_depth);

struct AssumptionReport {
    IncidenceMatrix incidence;
    std::optional<ConfigurationC> configuration;
    int max_depth = 0;
    bool holds() const { return incidence.primitive && configuration.has_value(); }
};

AssumptionReport check_standing_assumption(const SubstitutionRule& rule, int max_depth = 2);

// Symmetric-difference area between the union of tau^n(prototile) and the
// prototile, plus pairwise child overlap area.
double in_situ_defect(const SubstitutionRule& rule, int type, int n);

// Rule files.
SubstitutionRule load_rule(std::string_view document);
SubstitutionRule load_rule_file(const std::string& path);
std::string rule_to_json(const SubstitutionRule& rule);

// Built-ins live in <data dir>/rules/<name>.json. The data dir is
// $TILEPACK_DATA_DIR if set, else the compiled-in default.
std::string data_dir();
std::vector<std::string> builtin_rule_names();
SubstitutionRule builtin_rule(const std::string& name);
// A built-in name or a path to a rule file.
SubstitutionRule resolve_rule(const std::string& name_or_path);

} // namespace tilepack
