#include "oracles.hpp"
#include "tilepack/affine_qc.hpp"
#include "tilepack/errors.hpp"

#include <doctest.h>

#include <numbers>

using namespace tilepack;

namespace {

SubstitutionRule fixture(const std::string& name) {
    return load_rule_file(std::string(TILEPACK_TEST_DATA) + "/rules/" + name + ".json");
}

std::array<Point, 3> tri(const TriangulatedPolygon& t, int k) {
    const Triangle& f = t.triangles[k];
    return {t.positions[f[0]], t.positions[f[1]], t.positions[f[2]]};
}

SimilarityMap random_similarity(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> sc(0.05, 20.0);
    std::uniform_real_distribution<double> off(-10.0, 10.0);
    return {std::polar(sc(rng), ang(rng)), {off(rng), off(rng)}};
}

} // namespace

TEST_CASE("centroid fan has one triangle per corner") {
    const SubstitutionRule pin = builtin_rule("pinwheel");
    const TriangulatedPolygon t = triangulate_prototile(pin.prototiles[0]);
    CHECK(t.triangles.size() == 4);
    CHECK(t.interior_count() == 1);

    Prototile eq;
    eq.vertices = regular_polygon(3);
    eq.corners = eq.vertices;
    CHECK(triangulate_prototile(eq).triangles.size() == 3);

    for (const std::string& n : builtin_rule_names()) {
        const SubstitutionRule r = builtin_rule(n);
        for (const Prototile& p : r.prototiles) {
            const TriangulatedPolygon f = triangulate_prototile(p);
            CHECK(f.triangles.size() == p.corners.size());
            for (std::size_t k = 0; k < f.triangles.size(); ++k) {
                const auto s = tri(f, static_cast<int>(k));
                CHECK(orient(s[0], s[1], s[2]) > 0.0);
            }
        }
    }
}

TEST_CASE("chair fan is positively oriented") {
    const Prototile p = builtin_rule("chair").prototiles[0];
    const TriangulatedPolygon f = triangulate_prototile(p);
    CHECK(f.triangles.size() == p.corners.size());
    for (std::size_t k = 0; k < f.triangles.size(); ++k) {
        const auto s = tri(f, static_cast<int>(k));
        CHECK(oracle::shoelace({s[0], s[1], s[2]}) > 0.0);
    }
    CHECK(triangulate_prototile(p, TriangulationScheme::ear_clip).interior_count() == 0);
}

TEST_CASE("regular polygons have unit sides and anchored base") {
    for (int n = 3; n <= 8; ++n) {
        const auto poly = regular_polygon(n);
        REQUIRE(poly.size() == static_cast<std::size_t>(n));
        CHECK(std::abs(poly[0]) < 1e-15);
        CHECK(std::abs(poly[1] - 1.0) < 1e-15);
        for (int i = 0; i < n; ++i) CHECK(std::abs(poly[(i + 1) % n] - poly[i]) == doctest::Approx(1.0));
        CHECK(oracle::shoelace({poly.begin(), poly.end()}) > 0.0);
    }
}

TEST_CASE("Tutte embedding") {
    SUBCASE("single interior vertex lands at the centroid of an equilateral target") {
        Prototile eq;
        eq.vertices = regular_polygon(3);
        eq.corners = eq.vertices;
        const TriangulatedPolygon e = tutte_embed(triangulate_prototile(eq));
        const auto target = regular_polygon(3);
        CHECK(std::abs(e.positions[3] - (target[0] + target[1] + target[2]) / 3.0) < 1e-14);
    }
    SUBCASE("no interior vertices: boundary map unchanged") {
        const Prototile p = builtin_rule("pinwheel").prototiles[0];
        const TriangulatedPolygon e = tutte_embed(triangulate_prototile(p, TriangulationScheme::ear_clip));
        const auto sq = regular_polygon(4);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(e.positions[i] - sq[i]) < 1e-15);
    }
    SUBCASE("pinwheel fan centre goes to the square's centre") {
        const TriangulatedPolygon e = tutte_embed(triangulate_prototile(builtin_rule("pinwheel").prototiles[1]));
        CHECK(std::abs(e.positions[4] - Point{0.5, 0.5}) < 1e-12);
        CHECK(barycentric_residual(e) < 1e-10);
    }
    SUBCASE("every built-in prototile") {
        for (const std::string& n : builtin_rule_names()) {
            const SubstitutionRule r = builtin_rule(n);
            for (const Prototile& p : r.prototiles) {
                const TriangulatedPolygon e = tutte_embed(triangulate_prototile(p));
                CHECK(barycentric_residual(e) < 1e-10);
                for (std::size_t k = 0; k < e.triangles.size(); ++k) {
                    const auto s = tri(e, static_cast<int>(k));
                    CHECK(orient(s[0], s[1], s[2]) > 0.0);
                }
                // Corners land on the regular polygon's corners in order.
                const auto target = regular_polygon(p.side_count());
                int c = 0;
                for (int i = 0; i < e.boundary_count; ++i)
                    if (e.is_corner[i]) CHECK(std::abs(e.positions[i] - target[c++]) < 1e-12);
            }
        }
    }
}

TEST_CASE("triangle dilatation") {
    const std::array<Point, 3> a{Point{0, 0}, Point{1, 0}, Point{0, 1}};
    CHECK(triangle_dilatation(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    const std::array<Point, 3> b{Point{0, 0}, Point{2, 0}, Point{0, 1}};
    CHECK(triangle_dilatation(a, b) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(triangle_dilatation(b, a) == doctest::Approx(2.0).epsilon(1e-14));
    const std::array<Point, 3> flat{Point{0, 0}, Point{1, 0}, Point{2, 0}};
    CHECK_THROWS_AS(triangle_dilatation(a, flat), Error);
    CHECK_THROWS_AS(triangle_dilatation(flat, a), Error);
}

TEST_CASE("dilatation agrees with the directional-stretch grid oracle") {
    const Prototile p = builtin_rule("pinwheel").prototiles[0];
    const TriangulatedPolygon src = triangulate_prototile(p);
    const TriangulatedPolygon dst = tutte_embed(src);
    for (std::size_t k = 0; k < src.triangles.size(); ++k) {
        const auto s = tri(src, static_cast<int>(k));
        const auto d = tri(dst, static_cast<int>(k));
        CHECK(triangle_dilatation(s, d) == doctest::Approx(oracle::stretch_dilatation(s, d)).epsilon(1e-6));
    }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        std::array<Point, 3> s{Point{U(rng), U(rng)}, Point{U(rng), U(rng)}, Point{U(rng), U(rng)}};
        std::array<Point, 3> d{Point{U(rng), U(rng)}, Point{U(rng), U(rng)}, Point{U(rng), U(rng)}};
        if (std::abs(orient(s[0], s[1], s[2])) < 0.05 || std::abs(orient(d[0], d[1], d[2])) < 0.05) continue;
        const double k1 = triangle_dilatation(s, d);
        // The grid oracle resolves the maximizing direction to about 1e-11 in angle.
        CHECK(k1 == doctest::Approx(oracle::stretch_dilatation(s, d)).epsilon(1e-6));
    }
}

TEST_CASE("dilatation is similarity invariant") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        std::array<Point, 3> s{Point{U(rng), U(rng)}, Point{U(rng), U(rng)}, Point{U(rng), U(rng)}};
        std::array<Point, 3> d{Point{U(rng), U(rng)}, Point{U(rng), U(rng)}, Point{U(rng), U(rng)}};
        if (std::abs(orient(s[0], s[1], s[2])) < 0.05 || std::abs(orient(d[0], d[1], d[2])) < 0.05) continue;
        const double base = triangle_dilatation(s, d);
        const SimilarityMap m1 = random_similarity(rng), m2 = random_similarity(rng);
        std::array<Point, 3> s2, d2;
        for (int i = 0; i < 3; ++i) {
            s2[i] = m1(s[i]);
            d2[i] = m2(d[i]);
        }
        CHECK(std::abs(triangle_dilatation(s2, d2) - base) <= 1e-12 * base);
    }
}

TEST_CASE("rule kappa") {
    CHECK(rule_kappa(fixture("square")).kappa == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rule_kappa(fixture("triangle")).kappa == doctest::Approx(1.0).epsilon(1e-12));

    const SubstitutionRule pin = builtin_rule("pinwheel");
    const DilatationReport rep = rule_kappa(pin);
    CHECK(rep.kappa > 1.0);
    CHECK(std::isfinite(rep.kappa));
    double worst = 1.0;
    for (const auto& e : rep.entries) {
        const TriangulatedPolygon src = triangulate_prototile(pin.prototiles[e.prototile]);
        const TriangulatedPolygon dst = tutte_embed(src);
        const double k = oracle::stretch_dilatation(tri(src, e.triangle), tri(dst, e.triangle));
        CHECK(e.kappa == doctest::Approx(k).epsilon(1e-6));
        worst = std::max(worst, k);
    }
    CHECK(rep.kappa == doctest::Approx(worst).epsilon(1e-6));

    const DilatationReport pen = rule_kappa(builtin_rule("penrose"));
    REQUIRE(pen.per_prototile.size() == 4);
    CHECK(pen.kappa == *std::max_element(pen.per_prototile.begin(), pen.per_prototile.end()));

    // Depends only on the prototiles, so unchanged by the scheme's input patch.
    CHECK(rule_kappa(pin).kappa == rep.kappa);
    CHECK(kappa_csv(rep, pin).find("kappa_T") != std::string::npos);
}
