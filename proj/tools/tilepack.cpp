// tilepack: substitution tilings, conformal tilings by circle packing, and
// shape convergence of aggregate tiles.

#include "tilepack/affine_qc.hpp"
#include "tilepack/complex.hpp"
#include "tilepack/config.hpp"
#include "tilepack/errors.hpp"
#include "tilepack/packing.hpp"
#include "tilepack/render.hpp"
#include "tilepack/shape.hpp"
#include "tilepack/substitution.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

using namespace tilepack;

namespace {

std::string commented(const std::string& text) {
    std::ostringstream os;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) os << "# " << line << "\n";
    return os.str();
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") std::cout << content;
    else write_atomic(path, content);
}

// "root" -> the default node, "none" -> -1, "i.j.k" -> child indices below lineage node 0.
int highlight_node(const Patch& patch, const std::string& text, int root) {
    if (text == "root") return root;
    if (text == "none") return -1;
    int node = 0;
    std::istringstream in(text);
    for (std::string part; std::getline(in, part, '.');) {
        std::size_t used = 0;
        int k = -1;
        try {
            k = std::stoi(part, &used);
        } catch (const std::exception&) {
        }
        const auto& kids = patch.lineage[node].children;
        if (used != part.size() || k < 0 || k >= static_cast<int>(kids.size()))
            throw Error("cli-io", "highlight", "'" + text + "' is not a lineage path of this patch");
        node = kids[k];
    }
    return node;
}

void add_rule(CLI::App* app, RunConfig& c) {
    app->add_option("--rule", c.rule, "Built-in rule name or path to a rule JSON file")->capture_default_str();
}

void add_patch(CLI::App* app, RunConfig& c) {
    app->add_option("--host", c.host, "Host prototile label or id (default: first prototile)");
    app->add_option("--depth", c.depth, "Subdivision depth n")->capture_default_str();
}

void add_packing(CLI::App* app, RunConfig& c) {
    app->add_option("--buffer", c.buffer, "Buffer depth b around the root")->capture_default_str();
    app->add_option("--root", c.root, "Index of the root among level-b tiles (-1: most interior)")->capture_default_str();
    app->add_option("--hex-depth", c.hex_depth, "Refinement depth of each tile's triangulation")->capture_default_str();
    app->add_option_function<std::string>("--mode", [&c](const std::string& s) { c.mode = parse_mode(s); },
                                          "Packing mode {disc|euclid}")
        ->default_str("euclid");
    app->add_option_function<std::string>("--boundary-radii",
                                          [&c](const std::string& s) { c.boundary = parse_boundary_radii(s); },
                                          "Boundary radii in euclid mode {reference|uniform}")
        ->default_str("reference");
    app->add_option_function<std::string>("--solver", [&c](const std::string& s) { c.solver = parse_solver(s); },
                                          "Radius solver {hybrid|newton|uniform_neighbor}")
        ->default_str("hybrid");
    app->add_option("--tol", c.tol, "Angle-sum tolerance")->capture_default_str();
    app->add_option("--max-iters", c.max_iters, "Iteration cap of the radius solver")->capture_default_str();
    app->add_option("--sampling", c.sampling, "Hausdorff sampling step (<= 0: 1e-3 x diameter)")->capture_default_str();
}

int cmd_rules_list() {
    for (const std::string& name : builtin_rule_names()) {
        const SubstitutionRule r = builtin_rule(name);
        std::cout << name << "\t" << r.prototiles.size() << " prototiles\t" << r.description << "\n";
    }
    return 0;
}

int cmd_rules_validate(const RunConfig& c) {
    const SubstitutionRule r = resolve_rule(c.rule);
    const ValidationReport rep = validate_rule(r, c.validate_tol);
    std::cout << rep.summary(r);
    if (!rep.passed()) {
        std::cerr << "substitution-rules/validate_rule: rule " << r.name << " failed validation\n";
        return 1;
    }
    return 0;
}

int cmd_rules_kappa(const RunConfig& c) {
    const SubstitutionRule r = resolve_rule(c.rule);
    const DilatationReport rep = rule_kappa(r, c.scheme);
    emit(c.out, kappa_csv(rep, r));
    return 0;
}

int cmd_rules_assumption(const RunConfig& c) {
    const SubstitutionRule r = resolve_rule(c.rule);
    const AssumptionReport rep = check_standing_assumption(r, c.assumption_depth);
    std::cout << "rule " << r.name << "\nincidence matrix (row i: children of type j):\n";
    for (const auto& row : rep.incidence.entries) {
        std::cout << " ";
        for (long long x : row) std::cout << " " << x;
        std::cout << "\n";
    }
    std::cout << "primitive: " << (rep.incidence.primitive ? "yes" : "no");
    if (rep.incidence.primitive) std::cout << " (M^" << rep.incidence.exponent << " > 0)";
    std::cout << "\n";
    if (rep.configuration) {
        const ConfigurationC& cf = *rep.configuration;
        auto path = [](const std::vector<int>& p) {
            std::string s;
            for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "." : "") + std::to_string(p[i]);
            return s;
        };
        char angle[64];
        std::snprintf(angle, sizeof angle, "%.12g", cf.rotation_angle());
        std::cout << "configuration: found at depth " << cf.depth << " in prototile "
                  << r.prototiles[cf.host].label << " (id " << r.prototiles[cf.host].id << "); tiles "
                  << path(cf.path_p) << " and " << path(cf.path_q) << " of type " << r.prototiles[cf.type].label
                  << "; rotation angle " << angle << "\n";
    } else {
        std::cout << "configuration: none up to depth " << rep.max_depth << "\n";
    }
    std::cout << "standing assumption: " << (rep.holds() ? "holds" : "fails") << "\n";
    return rep.holds() ? 0 : 1;
}

int cmd_subdivide(const RunConfig& c) {
    const SubstitutionRule r = resolve_rule(c.rule);
    const Patch patch = subdivide_patch(Patch::single(r, c.host_type(r)), r, c.depth);
    const TileComplex cx = weld(patch, r);
    std::cerr << r.name << ": " << cx.tiles.size() << " tiles, " << cx.vertex_count() << " vertices, "
              << cx.edges.size() << " edges\n";
    if (!c.out.empty()) emit(c.out, complex_to_json(cx, r));
    if (!c.svg.empty()) emit(c.svg, render_svg(cx, highlight_node(patch, c.highlight, 0)));
    return 0;
}

void report_run(const AggregateRun& run) {
    const PackingDiagnostics d = packing_error(run.packing_complex, run.packing);
    const auto& root = run.buffered.patch.lineage_path(run.buffered.root);
    std::string path;
    for (std::size_t i = 0; i < root.size(); ++i) path += (i ? "." : "") + std::to_string(root[i]);
    std::printf("root %s (margin %.6g), patch tiles %zu, aggregate tiles %zu, packing vertices %zu\n",
                path.empty() ? "host" : path.c_str(), run.buffered.margin, run.complex.tiles.size(),
                run.boundary.tiles.size(), run.packing_complex.vertex_count());
    std::printf("angle-sum residual %.3e, tangency %.3e (%.3e of mean radius), iterations %lld\n", run.packing.residual,
                d.max_tangency, d.relative_tangency(), static_cast<long long>(run.packing.iterations));
    std::printf("d = %.10g, c = %.10g\n", run.d, run.c);
}

int cmd_pack(const RunConfig& c) {
    const SubstitutionRule r = resolve_rule(c.rule);
    const AggregateRun run = run_aggregate(r, c.depth, c.convergence_params(r));
    report_run(run);
    if (!c.out.empty()) {
        Provenance prov{r.name, c.depth, c.buffer, c.hex_depth, c.header()};
        emit(c.out, packing_to_json(run.packing_complex, run.packing, prov));
    }
    if (!c.svg.empty())
        emit(c.svg, render_svg(run.complex, run.packing_complex, run.packing,
                               highlight_node(run.complex.patch, c.highlight, run.buffered.root)));
    return 0;
}

std::string shape_csv(const Shape& s, const std::string& name) {
    std::ostringstream os;
    os.precision(12);
    for (std::size_t i = 0; i < s.points.size(); ++i)
        os << name << "," << i << "," << s.points[i].real() << "," << s.points[i].imag() << ","
           << (static_cast<int>(i) == s.a ? "a" : static_cast<int>(i) == s.b ? "b" : "") << "\n";
    return os.str();
}

int cmd_shape(const RunConfig& c) {
    const SubstitutionRule r = resolve_rule(c.rule);
    const AggregateRun run = run_aggregate(r, c.depth, c.convergence_params(r));
    report_run(run);
    if (!c.out.empty())
        emit(c.out, commented(c.header()) + "shape,index,x,y,corner\n" + shape_csv(run.euclidean, "euclidean") +
                        shape_csv(run.conformal, "conformal"));
    if (!c.svg.empty()) {
        RenderStyle style;
        style.panel = std::make_pair(run.euclidean, run.conformal);
        emit(c.svg, render_svg(run.complex, run.packing_complex, run.packing,
                               highlight_node(run.complex.patch, c.highlight, run.buffered.root), style));
    }
    return 0;
}

int cmd_converge(const RunConfig& c) {
    const SubstitutionRule r = resolve_rule(c.rule);
    const ConvergenceSeries s = shape_convergence(r, c.n_max, c.convergence_params(r));
    emit(c.out, series_csv(s, c.header()));
    if (!c.out.empty())
        for (const ConvergenceRow& row : s.rows)
            std::printf("n=%d tiles=%zu vertices=%zu residual=%.2e c=%.8f (%.1fs)\n", row.n, row.tiles, row.vertices,
                        row.packing_residual, row.c_n, row.seconds);
    if (s.failure) {
        std::cerr << *s.failure << "\n";
        return 1;
    }
    return 0;
}

int cmd_render(const RunConfig& c, bool packed, bool circles) {
    const SubstitutionRule r = resolve_rule(c.rule);
    RenderStyle style;
    style.circles = circles;
    std::string svg;
    if (!packed) {
        const Patch patch = subdivide_patch(Patch::single(r, c.host_type(r)), r, c.depth);
        svg = render_svg(weld(patch, r), highlight_node(patch, c.highlight, 0), style);
    } else {
        const AggregateRun run = run_aggregate(r, c.depth, c.convergence_params(r));
        style.panel = std::make_pair(run.euclidean, run.conformal);
        svg = render_svg(run.complex, run.packing_complex, run.packing,
                         highlight_node(run.complex.patch, c.highlight, run.buffered.root), style);
    }
    emit(c.svg.empty() ? c.out : c.svg, svg);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Substitution tilings, conformal tilings by circle packing, and aggregate shape convergence"};
    app.require_subcommand(1);
    RunConfig c;

    auto* rules = app.add_subcommand("rules", "Inspect substitution rules");
    rules->require_subcommand(1);
    rules->add_subcommand("list", "List built-in rules");
    auto* validate = rules->add_subcommand("validate", "Validate a rule");
    add_rule(validate, c);
    validate->add_option("--tol", c.validate_tol, "Relative area tolerance")->capture_default_str();
    auto* kappa = rules->add_subcommand("kappa", "Quasiconformal bound of the affine tiling, as CSV");
    add_rule(kappa, c);
    kappa->add_option_function<std::string>("--scheme", [&c](const std::string& s) { c.scheme = parse_scheme(s); },
                                            "Triangulation scheme {centroid_fan|ear_clip}")
        ->default_str("centroid_fan");
    kappa->add_option("--out", c.out, "Output CSV (default: stdout)");
    auto* assumption = rules->add_subcommand("check-assumption", "Primitivity and the special configuration");
    add_rule(assumption, c);
    assumption->add_option("--depth", c.assumption_depth, "Maximum search depth")->capture_default_str();

    auto* subdivide = app.add_subcommand("subdivide", "Subdivide one prototile and weld the result");
    add_rule(subdivide, c);
    add_patch(subdivide, c);
    subdivide->add_option("--out", c.out, "Complex JSON output");
    subdivide->add_option("--svg", c.svg, "SVG output");
    subdivide->add_option("--highlight", c.highlight, "Lineage to highlight: root, none, or i.j.k")->capture_default_str();

    auto* pack = app.add_subcommand("pack", "Circle-pack a buffered patch around an n-aggregate");
    add_rule(pack, c);
    add_patch(pack, c);
    add_packing(pack, c);
    pack->add_option("--out", c.out, "Packing JSON output");
    pack->add_option("--svg", c.svg, "SVG output");
    pack->add_option("--highlight", c.highlight, "Lineage to highlight: root, none, or i.j.k")->capture_default_str();

    auto* shape = app.add_subcommand("shape", "Distance between a normalized conformal aggregate and its tile");
    add_rule(shape, c);
    add_patch(shape, c);
    add_packing(shape, c);
    shape->add_option("--out", c.out, "CSV of both normalized shapes");
    shape->add_option("--svg", c.svg, "SVG with the side-by-side panel");
    shape->add_option("--highlight", c.highlight, "Lineage to highlight: root, none, or i.j.k")->capture_default_str();

    auto* converge = app.add_subcommand("converge", "Shape-convergence series c_0..c_nmax as CSV");
    add_rule(converge, c);
    converge->add_option("--host", c.host, "Host prototile label or id (default: first prototile)");
    converge->add_option("--n-max", c.n_max, "Last aggregate depth")->capture_default_str();
    add_packing(converge, c);
    converge->add_option("--out", c.out, "Output CSV (default: stdout)");

    auto* render = app.add_subcommand("render", "SVG of a Euclidean or packed patch");
    add_rule(render, c);
    add_patch(render, c);
    add_packing(render, c);
    bool packed = false, circles = false;
    render->add_flag("--packed", packed, "Render the conformal (packed) patch");
    render->add_flag("--circles", circles, "Draw packing circles");
    render->add_option("--svg,--out", c.svg, "SVG output (default: stdout)");
    render->add_option("--highlight", c.highlight, "Lineage to highlight: root, none, or i.j.k")->capture_default_str();

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            return app.exit(e);
        }
        c.validate();
        if (rules->parsed()) {
            if (rules->got_subcommand("list")) return cmd_rules_list();
            if (validate->parsed()) return cmd_rules_validate(c);
            if (kappa->parsed()) return cmd_rules_kappa(c);
            if (assumption->parsed()) return cmd_rules_assumption(c);
        }
        if (subdivide->parsed()) return cmd_subdivide(c);
        if (pack->parsed()) return cmd_pack(c);
        if (shape->parsed()) return cmd_shape(c);
        if (converge->parsed()) return cmd_converge(c);
        if (render->parsed()) return cmd_render(c, packed, circles);
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: cli-io/main: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
