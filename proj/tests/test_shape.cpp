#include "oracles.hpp"
#include "tilepack/errors.hpp"
#include "tilepack/shape.hpp"

#include <doctest.h>

#include <numbers>

using namespace tilepack;

namespace {

SubstitutionRule fixture(const std::string& name) {
    return load_rule_file(std::string(TILEPACK_TEST_DATA) + "/rules/" + name + ".json");
}

Shape square(double s = 1.0, Point shift = {0, 0}) {
    return Shape{{shift, shift + Point{s, 0}, shift + Point{s, s}, shift + Point{0, s}}, 0, 1};
}

std::vector<oracle::P> pts(const Shape& s) { return {s.points.begin(), s.points.end()}; }

Shape random_shape(std::mt19937_64& rng, int n) {
    const auto p = oracle::random_polygon(rng, {0, 0}, 1.0, n);
    return Shape{{p.begin(), p.end()}, 0, 1};
}

SimilarityMap random_similarity(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi), sc(0.1, 10.0), off(-5.0, 5.0);
    return {std::polar(sc(rng), ang(rng)), {off(rng), off(rng)}};
}

} // namespace

TEST_CASE("normalize_shape") {
    const Shape s{{{2, 0}, {4, 0}, {3, 1}}, 0, 1};
    const Shape n = normalize_shape(s);
    CHECK(std::abs(n.points[0]) < 1e-15);
    CHECK(std::abs(n.points[1] - 1.0) < 1e-15);
    CHECK(std::abs(n.points[2] - Point{0.5, 0.5}) < 1e-15);

    const Shape again = normalize_shape(n);
    for (std::size_t i = 0; i < n.points.size(); ++i) CHECK(std::abs(again.points[i] - n.points[i]) <= 1e-15);

    std::mt19937_64 rng(17);
    for (int k = 0; k < 20; ++k) {
        const Shape a = random_shape(rng, 7);
        const Shape b = normalize_shape(transform_shape(a, random_similarity(rng)));
        const Shape na = normalize_shape(a);
        for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(std::abs(b.points[i] - na.points[i]) < 1e-12);
    }

    const Shape bad{{{1, 1}, {1, 1}, {2, 3}}, 0, 1};
    CHECK_THROWS_AS(normalize_shape(bad), Error);
}

TEST_CASE("Hausdorff distance examples against the brute-force oracle") {
    CHECK(hausdorff_distance(square(), square(), 1e-3) == 0.0);

    const double t = hausdorff_distance(square(), square(1.0, {0.3, 0}), 1e-3);
    CHECK(t == doctest::Approx(oracle::hausdorff(pts(square()), pts(square(1.0, {0.3, 0})), 1e-4)).epsilon(1e-3));
    CHECK(t == doctest::Approx(0.3).epsilon(1e-9));

    // The far corner (2,2) of the doubled square is sqrt(2) from the unit square.
    const double d = hausdorff_distance(square(), square(2.0), 1e-3);
    CHECK(d == doctest::Approx(oracle::hausdorff(pts(square()), pts(square(2.0)), 1e-4)).epsilon(1e-3));
    CHECK(d == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("Hausdorff metric properties") {
    std::mt19937_64 rng(23);
    const double step = 1e-3;
    for (int k = 0; k < 20; ++k) {
        const Shape a = random_shape(rng, 6), b = random_shape(rng, 9), c = random_shape(rng, 5);
        const double ab = hausdorff_distance(a, b, step), ba = hausdorff_distance(b, a, step);
        CHECK(std::abs(ab - ba) <= 1e-12);
        CHECK(ab <= hausdorff_distance(a, c, step) + hausdorff_distance(c, b, step) + step);
        CHECK(hausdorff_distance(a, a, step) <= 1e-15);
    }
}

TEST_CASE("Hausdorff distance is invariant under a common similarity after normalization") {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 20; ++k) {
        const Shape a = random_shape(rng, 8), b = random_shape(rng, 8);
        const double base = hausdorff_distance(normalize_shape(a), normalize_shape(b), 1e-3);
        const SimilarityMap m = random_similarity(rng);
        const double moved =
            hausdorff_distance(normalize_shape(transform_shape(a, m)), normalize_shape(transform_shape(b, m)), 1e-3);
        CHECK(std::abs(moved - base) < 1e-9);
    }
}

TEST_CASE("Euclidean aggregate equals its ancestor tile") {
    for (const std::string& n : builtin_rule_names()) {
        const SubstitutionRule r = builtin_rule(n);
        for (int m = 0; m <= 3; ++m) {
            if (tile_count(r, 0, m + 1) > 2000) continue;
            RootSelector sel;
            sel.buffer = 1;
            const BufferedPatch bp = buffered_patch(r, 0, sel, m);
            const TileComplex cx = weld(bp.patch, r);
            const AggregateBoundary ab = aggregate_boundary(cx, bp.root, r);
            const LineageNode& root = bp.patch.lineage[bp.root];
            const Shape agg = normalize_shape(euclidean_aggregate_shape(cx, ab));
            const Shape tile = normalize_shape(euclidean_tile_shape(r, root.type, root.map));
            INFO(n << " m=" << m);
            CHECK(hausdorff_distance(agg, tile, 1e-3) < 1e-9);
        }
    }
}

TEST_CASE("aggregate shape sampling") {
    const SubstitutionRule pin = builtin_rule("pinwheel");
    const TileComplex one = weld(Patch::single(pin, 0), pin);
    const AggregateBoundary ab = aggregate_boundary(one, 0, pin);
    for (int hex = 0; hex <= 2; ++hex) {
        const PackingComplex pc = build_triangulation(one, hex);
        SolveOptions so;
        so.mode = PackingMode::euclidean_boundary;
        const Packing p = layout(pc, solve_radii(pc, so));
        const Shape s = aggregate_shape(one, pc, p, ab);
        CHECK(s.points.size() == 4u << hex);
        CHECK(s.a == 0);
        CHECK(s.b == pin.prototiles[0].base_corner_indices()[1] << hex);
        if (hex == 0)
            for (int i = 0; i < 4; ++i) CHECK(std::abs(s.points[i] - p.centers[one.tiles[0].corners[i]]) < 1e-15);
    }
}

TEST_CASE("pinwheel m=2 conformal aggregate encloses its tile centres") {
    ConvergenceParams params;
    const AggregateRun run = run_aggregate(builtin_rule("pinwheel"), 2, params);
    CHECK(run.boundary.tiles.size() == 25);
    CHECK(is_simple(run.conformal.points, 1e-12));
    const SimilarityMap norm = normalizing_map(aggregate_shape(run.complex, run.packing_complex, run.packing, run.boundary));
    const std::vector<oracle::P> curve = pts(run.conformal);
    for (int t : run.boundary.tiles) {
        const Point c = norm(run.packing.centers[run.packing_complex.tile_center[t]]);
        CHECK(oracle::winding(c, curve) == 1);
    }
    CHECK(run.c >= 0.0);
    CHECK(run.c == doctest::Approx(run.d / shape_diameter(run.euclidean)));
}

TEST_CASE("square rule: the conformal aggregate is the square") {
    const SubstitutionRule sq = fixture("square");
    ConvergenceParams params;
    params.hex_depth = 2;
    const ConvergenceSeries s = shape_convergence(sq, 2, params);
    REQUIRE_FALSE(s.failure.has_value());
    REQUIRE(s.rows.size() == 3);
    for (const ConvergenceRow& r : s.rows) CHECK(r.c_n < 0.01);
}

TEST_CASE("convergence series is deterministic and well formed") {
    const SubstitutionRule chair = builtin_rule("chair");
    ConvergenceParams params;
    const ConvergenceSeries a = shape_convergence(chair, 2, params), b = shape_convergence(chair, 2, params);
    REQUIRE(a.rows.size() == 3);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].c_n == b.rows[i].c_n);
        CHECK(a.rows[i].d_n >= 0.0);
        CHECK(a.rows[i].tiles == static_cast<std::size_t>(std::pow(4, i)));
        CHECK(a.rows[i].packing_residual <= params.tol);
    }
    const std::string csv = series_csv(a, "rule=chair\nbuffer=2");
    CHECK(csv.rfind("# rule=chair\n# buffer=2\nrule,n,tiles,hex_depth,buffer,mode,packing_residual,d_n,c_n\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK_THROWS_AS(shape_convergence(chair, -1, params), Error);
}

TEST_CASE("refinement trend on the pinwheel root aggregate") {
    const SubstitutionRule pin = builtin_rule("pinwheel");
    ConvergenceParams params;
    std::vector<Shape> shapes;
    for (int hex = 0; hex <= 2; ++hex) {
        params.hex_depth = hex;
        shapes.push_back(run_aggregate(pin, 1, params).conformal);
    }
    const double d21 = hausdorff_distance(shapes[2], shapes[1], 1e-3);
    const double d10 = hausdorff_distance(shapes[1], shapes[0], 1e-3);
    CHECK(d21 < d10);
}
