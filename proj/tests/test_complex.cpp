#include "oracles.hpp"
#include "tilepack/complex.hpp"
#include "tilepack/errors.hpp"

#include <doctest.h>

#include <set>

using namespace tilepack;

namespace {

Patch tau(const SubstitutionRule& r, int type, int n) { return subdivide_patch(Patch::single(r, type), r, n); }

std::vector<oracle::P> as_oracle(const Polygon& p) { return {p.begin(), p.end()}; }

// Brute-force check: no two tile interiors overlap in positive area.
double max_pair_overlap(const SubstitutionRule& r, const Patch& p) {
    double worst = 0.0;
    for (std::size_t i = 0; i < p.tiles.size(); ++i)
        for (std::size_t j = i + 1; j < p.tiles.size(); ++j)
            worst = std::max(worst, intersection_area(tile_polygon(r, p.tiles[i]), tile_polygon(r, p.tiles[j])));
    return worst;
}

} // namespace

TEST_CASE("weld pinwheel tau^1") {
    const SubstitutionRule r = builtin_rule("pinwheel");
    const TileComplex cx = weld(tau(r, 0, 1), r);
    CHECK(cx.tiles.size() == 5);
    for (const ComplexTile& t : cx.tiles) CHECK(t.corners.size() == 4);
    const auto bnd = cx.boundary_cycle();
    std::set<std::pair<int, int>> bedges;
    for (std::size_t i = 0; i < bnd.size(); ++i) {
        const int a = bnd[i], b = bnd[(i + 1) % bnd.size()];
        bedges.insert({std::min(a, b), std::max(a, b)});
    }
    for (const ComplexEdge& e : cx.edges) {
        const bool on_boundary = bedges.count({std::min(e.a, e.b), std::max(e.a, e.b)}) > 0;
        CHECK(e.tiles.size() == (on_boundary ? 1u : 2u));
    }
    CHECK(cx.euler_characteristic() == 1);
}

TEST_CASE("weld a single tile") {
    const SubstitutionRule r = builtin_rule("chair");
    const TileComplex cx = weld(Patch::single(r, 0), r);
    CHECK(cx.tiles.size() == 1);
    CHECK(cx.vertex_count() == 8);
    for (const ComplexEdge& e : cx.edges) CHECK(e.tiles.size() == 1);
    CHECK(cx.euler_characteristic() == 1);
}

TEST_CASE("welded complexes are discs and pass the intersection condition") {
    for (const std::string& n : builtin_rule_names()) {
        const SubstitutionRule r = builtin_rule(n);
        for (std::size_t t = 0; t < r.size(); ++t) {
            const Patch p = tau(r, static_cast<int>(t), 2);
            const TileComplex cx = weld(p, r);
            INFO(n << " type " << t);
            CHECK(check_intersection_condition(cx).passed());
            CHECK(cx.euler_characteristic() == 1);
            CHECK_NOTHROW(cx.boundary_cycle());
            // Independent oracle: pairwise clipping finds no overlap.
            CHECK(max_pair_overlap(r, p) < 1e-12);
        }
    }
}

TEST_CASE("pinwheel tau^4 passes the intersection condition") {
    const SubstitutionRule r = builtin_rule("pinwheel");
    const TileComplex cx = weld(tau(r, 0, 4), r);
    CHECK(cx.tiles.size() == 625);
    CHECK(check_intersection_condition(cx).passed());
}

TEST_CASE("welding is stable under a finer eps") {
    for (const std::string& n : builtin_rule_names()) {
        const SubstitutionRule r = builtin_rule(n);
        const int depth = r.size() > 2 ? 3 : 4;
        const Patch p = tau(r, 0, depth);
        const TileComplex coarse = weld(p, r);
        WeldOptions fine;
        fine.eps = coarse.eps / 10.0;
        CHECK(weld(p, r, fine).vertex_count() == coarse.vertex_count());
    }
}

TEST_CASE("a shifted tile violates the intersection condition") {
    const SubstitutionRule r = builtin_rule("pinwheel");
    Patch p = tau(r, 0, 1);
    p.tiles[2].map.offset += Point{0.05, 0.03};
    WeldOptions loose;
    loose.strict = false;
    const TileComplex cx = weld(p, r, loose);
    const IntersectionReport rep = check_intersection_condition(cx);
    REQUIRE_FALSE(rep.passed());
    bool named = false;
    for (const IntersectionViolation& v : rep.violations) named = named || v.tile_a == 2 || v.tile_b == 2;
    CHECK(named);
    CHECK_FALSE(rep.violations[0].describe().empty());
    CHECK_THROWS_AS(weld(p, r), Error);
}

TEST_CASE("empty complex passes vacuously") {
    CHECK(check_intersection_condition(TileComplex{}).passed());
}

TEST_CASE("buffered patches") {
    const SubstitutionRule r = builtin_rule("pinwheel");
    RootSelector sel;
    sel.buffer = 2;
    const BufferedPatch b0 = buffered_patch(r, 0, sel, 0);
    CHECK(b0.patch.tiles.size() == 25);
    CHECK(b0.patch.lineage[b0.root].level == 2);
    CHECK(b0.margin > 0.0);

    const BufferedPatch b2 = buffered_patch(r, 0, sel, 2);
    CHECK(b2.patch.tiles.size() == 625);
    CHECK(b2.patch.descendant_tiles(b2.root).size() == 25);
    CHECK(b2.margin == doctest::Approx(b0.margin));

    sel.buffer = 0;
    const BufferedPatch u = buffered_patch(r, 1, sel, 2);
    CHECK(u.root == 0);
    CHECK(u.patch.tiles.size() == 25);
    CHECK(u.margin == 0.0);

    // The selected root is insulated: no root tile touches the host boundary.
    const SubstitutionRule chair = builtin_rule("chair");
    sel.buffer = 2;
    const BufferedPatch c = buffered_patch(chair, 0, sel, 1);
    const auto host = as_oracle(chair.prototiles[0].vertices);
    for (int t : c.patch.descendant_tiles(c.root))
        for (Point v : tile_polygon(chair, c.patch.tiles[t])) CHECK(oracle::curve_dist(v, host) >= c.margin - 1e-12);
}

TEST_CASE("aggregate boundary of a single tile is its corner cycle") {
    const SubstitutionRule r = builtin_rule("pinwheel");
    const Patch p = tau(r, 0, 1);
    const TileComplex cx = weld(p, r);
    const int node = p.tiles[3].node;
    const AggregateBoundary ab = aggregate_boundary(cx, node, r);
    CHECK(ab.path == cx.tiles[3].corners);
    CHECK(ab.tiles == std::vector<int>{3});
    CHECK(ab.corner_marks.size() == 4);
}

TEST_CASE("aggregate boundaries enclose their descendants") {
    struct Case {
        const char* rule;
        int m;
        std::size_t tiles;
    };
    for (const Case& k : {Case{"pinwheel", 2, 25}, Case{"chair", 1, 4}, Case{"sphinx", 2, 16}}) {
        const SubstitutionRule r = builtin_rule(k.rule);
        RootSelector sel;
        const BufferedPatch bp = buffered_patch(r, 0, sel, k.m);
        const TileComplex cx = weld(bp.patch, r);
        const AggregateBoundary ab = aggregate_boundary(cx, bp.root, r);
        INFO(k.rule);
        CHECK(ab.tiles.size() == k.tiles);
        const LineageNode& root = bp.patch.lineage[bp.root];
        const double root_area = r.prototiles[root.type].area() * std::norm(root.map.factor);
        CHECK(oracle::shoelace(as_oracle(ab.polygon(cx))) == doctest::Approx(root_area).epsilon(1e-9));

        // Corner marks sit at the root's corners; the base corners are the
        // root's base edge endpoints.
        const Polygon corners = placed_corners(r, root.type, root.map);
        REQUIRE(ab.corner_marks.size() == corners.size());
        for (std::size_t i = 0; i < corners.size(); ++i)
            CHECK(std::abs(cx.positions[ab.path[ab.corner_marks[i]]] - corners[i]) < 1e-9);
        const auto base = r.prototiles[root.type].base_corner_indices();
        CHECK(ab.base_a == ab.corner_marks[base[0]]);
        CHECK(ab.base_b == ab.corner_marks[base[1]]);
    }
}

TEST_CASE("complex JSON lists tiles and vertices") {
    const SubstitutionRule r = builtin_rule("domino");
    const TileComplex cx = weld(tau(r, 0, 1), r);
    const std::string js = complex_to_json(cx, r);
    CHECK(js.find("\"tiles\"") != std::string::npos);
    CHECK(js.find("\"vertices\"") != std::string::npos);
}
