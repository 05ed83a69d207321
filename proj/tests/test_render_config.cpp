#include "tilepack/config.hpp"
#include "tilepack/errors.hpp"
#include "tilepack/render.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tilepack;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("render a pinwheel tau^2 patch") {
    const SubstitutionRule r = builtin_rule("pinwheel");
    const Patch p = subdivide_patch(Patch::single(r, 0), r, 2);
    const TileComplex cx = weld(p, r);
    const std::string svg = render_svg(cx, 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(count(svg, "<path class=\"tile") == 25);
    CHECK(count(svg, "class=\"tile hl\"") == 25);
    CHECK(count(render_svg(cx, -1), "class=\"tile hl\"") == 0);
    CHECK(render_svg(cx, 0) == svg);
    CHECK_THROWS_AS(render_svg(cx, 100000), Error);
}

TEST_CASE("highlight a level-2 node inside tau^4") {
    const SubstitutionRule r = builtin_rule("pinwheel");
    const Patch p = subdivide_patch(Patch::single(r, 0), r, 4);
    const TileComplex cx = weld(p, r);
    const int node = p.nodes_at_level(2)[7];
    const std::string svg = render_svg(cx, node);
    CHECK(count(svg, "<path class=\"tile") == 625);
    CHECK(count(svg, "class=\"tile hl\"") == 25);
}

TEST_CASE("empty patch renders a valid document") {
    const std::string svg = render_svg(TileComplex{}, -1);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count(svg, "<path") == 0);
}

TEST_CASE("packed rendering") {
    const SubstitutionRule r = builtin_rule("chair");
    const TileComplex cx = weld(subdivide_patch(Patch::single(r, 0), r, 2), r);
    const PackingComplex pc = build_triangulation(cx, 1);
    const Packing radii = solve_radii(pc);
    CHECK_THROWS_AS(render_svg(cx, pc, radii, -1), Error);
    const Packing laid = layout(pc, radii);
    RenderStyle style;
    style.circles = true;
    const std::string svg = render_svg(cx, pc, laid, 0, style);
    CHECK(count(svg, "<path class=\"tile") == 16);
    CHECK(svg.find("id=\"circles\"") != std::string::npos);

    style.circles = false;
    style.panel = std::make_pair(Shape{{{0, 0}, {1, 0}, {0, 1}}, 0, 1}, Shape{{{0, 0}, {1, 0}, {0.1, 0.9}}, 0, 1});
    const std::string with_panel = render_svg(cx, pc, laid, 0, style);
    CHECK(with_panel.find("class=\"euclidean\"") != std::string::npos);
    CHECK(with_panel.find("class=\"conformal\"") != std::string::npos);
}

TEST_CASE("RunConfig validation names the field") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    auto rejects = [](RunConfig cfg, const std::string& field) {
        try {
            cfg.validate();
            return false;
        } catch (const Error& e) {
            return e.module() == "cli-io" && std::string(e.what()).find(field) != std::string::npos;
        }
    };
    c.hex_depth = 9;
    CHECK(rejects(c, "hex_depth"));
    c = {};
    c.buffer = -1;
    CHECK(rejects(c, "buffer"));
    c = {};
    c.tol = 0.0;
    CHECK(rejects(c, "tol"));
    c = {};
    c.depth = 20;
    CHECK(rejects(c, "depth"));
    c = {};
    c.n_max = 7;
    CHECK(rejects(c, "n_max"));
}

TEST_CASE("RunConfig header and host selection") {
    RunConfig c;
    const std::string h = c.header();
    for (const char* key : {"rule=pinwheel", "buffer=2", "hex_depth=1", "mode=euclid", "boundary_radii=reference"})
        CHECK(h.find(key) != std::string::npos);
    const SubstitutionRule pin = builtin_rule("pinwheel");
    CHECK(c.host_type(pin) == 0);
    c.host = "p2";
    CHECK(c.host_type(pin) == 1);
    c.host = "1";
    CHECK(c.host_type(pin) == 0);
    c.host = "nope";
    CHECK_THROWS_AS(c.host_type(pin), Error);
    c.host = "";
    const ConvergenceParams params = c.convergence_params(pin);
    CHECK(params.selector.buffer == 2);
    CHECK(params.mode == PackingMode::euclidean_boundary);
    CHECK(params.boundary == BoundaryRadii::reference);
}

TEST_CASE("write_atomic") {
    const auto dir = std::filesystem::temp_directory_path() / "tilepack_write_test";
    std::filesystem::create_directories(dir);
    const auto file = dir / "out.txt";
    write_atomic(file.string(), "first\n");
    write_atomic(file.string(), "second\n");
    CHECK(slurp(file) == "second\n");
    CHECK_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
    CHECK_THROWS_AS(write_atomic((dir / "missing" / "x.txt").string(), "x"), Error);
    std::filesystem::remove_all(dir);
}
