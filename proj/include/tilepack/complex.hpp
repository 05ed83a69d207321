#pragma once

#include "tilepack/geometry.hpp"
#include "tilepack/substitution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tilepack {

struct ComplexTile {
    int type = 0;
    int node = -1;             // lineage node
    std::vector<int> corners;  // welded vertex ids, CCW
};

struct ComplexEdge {
    int a = 0;
    int b = 0;
    std::vector<int> tiles;
};

struct TileComplex {
    std::vector<Point> positions;
    std::vector<ComplexTile> tiles;
    std::vector<ComplexEdge> edges;
    Patch patch;  // source patch; tile i of the complex is patch.tiles[i]
    double eps = 0.0;

    std::size_t vertex_count() const { return positions.size(); }
    int edge_index(int a, int b) const;  // -1 if absent
    int euler_characteristic() const {
        return static_cast<int>(positions.size()) - static_cast<int>(edges.size()) + static_cast<int>(tiles.size());
    }
    // The single outer boundary cycle, CCW. Throws when the complex is not a disc.
    std::vector<int> boundary_cycle() const;
    Polygon tile_polygon(int t) const;

    std::vector<std::pair<std::uint64_t, int>> edge_lookup;  // sorted (key, edge)
};

struct WeldOptions {
    double eps = -1.0;  // <= 0: 1e-6 x patch diameter
    bool strict = true; // throw on intersection-condition violations
};

TileComplex weld(const Patch& patch, const SubstitutionRule& rule, const WeldOptions& opts = {});

struct IntersectionViolation {
    std::string kind;  // "t-junction", "crossing", "overlap", "non-manifold-edge", "folded-edge"
    int tile_a = -1;
    int tile_b = -1;
    Point where{0.0, 0.0};
    std::string describe() const;
};

struct IntersectionReport {
    std::vector<IntersectionViolation> violations;
    bool passed() const { return violations.empty(); }
};

IntersectionReport check_intersection_condition(const TileComplex& complex);

struct RootSelector {
    int buffer = 2;  // b
    int child = -1;  // index among the level-b tiles in lineage order; -1 = most interior
};

struct BufferedPatch {
    Patch patch;
    int root = 0;  // lineage node of the root (level b)
    int host = 0;
    int buffer = 0;
    int n = 0;
    double margin = 0.0;  // Euclidean distance from the root to the host boundary
};

BufferedPatch buffered_patch(const SubstitutionRule& rule, int host, const RootSelector& selector, int n);

struct AggregateBoundary {
    int ancestor = -1;
    std::vector<int> path;          // vertex ids, CCW, starting at the ancestor's first corner
    std::vector<int> corner_marks;  // positions in `path` of the ancestor's corners
    int base_a = 0;                 // positions in `path` of the base corners
    int base_b = 0;
    std::vector<int> tiles;         // descendant tiles

    Polygon polygon(const TileComplex& complex) const;
};

AggregateBoundary aggregate_boundary(const TileComplex& complex, int root, const SubstitutionRule& rule);

std::string complex_to_json(const TileComplex& complex, const SubstitutionRule& rule);

} // namespace tilepack
