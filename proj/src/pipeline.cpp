#include "tilepack/errors.hpp"
#include "tilepack/shape.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace tilepack {

AggregateRun run_aggregate(const SubstitutionRule& rule, int n, const ConvergenceParams& params) {
    AggregateRun run;
    run.buffered = buffered_patch(rule, params.host, params.selector, n);
    run.complex = weld(run.buffered.patch, rule);
    run.boundary = aggregate_boundary(run.complex, run.buffered.root, rule);
    run.packing_complex = build_triangulation(run.complex, params.hex_depth);

    SolveOptions so;
    so.mode = params.mode;
    so.tol = params.tol;
    so.max_iters = params.max_iters;
    so.solver = params.solver;
    if (params.boundary == BoundaryRadii::reference && params.mode == PackingMode::euclidean_boundary)
        so.boundary_radii = reference_boundary_radii(run.packing_complex);
    Packing radii = solve_radii(run.packing_complex, so);

    // Base corner a of the root at 0, the first step along its base edge on
    // the positive real axis. Unbuffered disc packings put a at infinity, so
    // the default origin is used instead.
    LayoutOptions lo;
    const AggregateBoundary& ab = run.boundary;
    const int a = ab.path[ab.base_a];
    if (std::isfinite(radii.radii[a])) {
        lo.origin = a;
        const int next = ab.path[(ab.base_a + 1) % ab.path.size()];
        lo.axis = run.packing_complex.edge_chain(run.complex, a, next)[1];
    }
    run.packing = layout(run.packing_complex, radii, lo);

    const LineageNode& root = run.buffered.patch.lineage[run.buffered.root];
    run.conformal = normalize_shape(aggregate_shape(run.complex, run.packing_complex, run.packing, ab));
    run.euclidean = normalize_shape(euclidean_tile_shape(rule, root.type, root.map));
    const double diam = shape_diameter(run.euclidean);
    run.sampling = params.sampling > 0.0 ? params.sampling : 1e-3 * diam;
    run.d = hausdorff_distance(run.conformal, run.euclidean, run.sampling);
    run.c = run.d / diam;
    return run;
}

ConvergenceSeries shape_convergence(const SubstitutionRule& rule, int n_max, const ConvergenceParams& params) {
    if (n_max < 0) throw Error("shape-metrics", "shape_convergence", "n_max must be >= 0");
    ConvergenceSeries series;
    series.rule = rule.name;
    series.params = params;
    for (int n = 0; n <= n_max; ++n) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const AggregateRun run = run_aggregate(rule, n, params);
            ConvergenceRow row;
            row.n = n;
            row.tiles = run.boundary.tiles.size();
            row.patch_tiles = run.complex.tiles.size();
            row.vertices = run.packing_complex.vertex_count();
            row.packing_residual = run.packing.residual;
            row.d_n = run.d;
            row.c_n = run.c;
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            series.rows.push_back(row);
        } catch (const Error& e) {
            series.failure = "n=" + std::to_string(n) + ": " + e.what();
            break;
        }
    }
    return series;
}

std::string series_csv(const ConvergenceSeries& s, const std::string& header_comment) {
    std::ostringstream os;
    std::istringstream lines(header_comment);
    for (std::string line; std::getline(lines, line);) os << "# " << line << "\n";
    if (s.failure) os << "# failure: " << *s.failure << "\n";
    os << "rule,n,tiles,hex_depth,buffer,mode,packing_residual,d_n,c_n\n";
    os.precision(10);
    for (const ConvergenceRow& r : s.rows)
        os << s.rule << "," << r.n << "," << r.tiles << "," << s.params.hex_depth << "," << s.params.selector.buffer
           << "," << to_string(s.params.mode) << "," << r.packing_residual << "," << r.d_n << "," << r.c_n << "\n";
    return os.str();
}

} // namespace tilepack
