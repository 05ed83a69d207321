#pragma once

#include "tilepack/affine_qc.hpp"
#include "tilepack/packing.hpp"
#include "tilepack/shape.hpp"

#include <string>

namespace tilepack {

// Every tunable of a CLI run. Defaults match the reference experiments.
struct RunConfig {
    std::string rule = "pinwheel";
    std::string host;         // prototile label or id; empty: first prototile
    int depth = 2;            // subdivision depth n for single runs
    int n_max = 4;            // last n of a convergence series
    int buffer = 2;
    int root = -1;            // lineage child index at level b; -1 picks the most interior
    int hex_depth = 1;
    PackingMode mode = PackingMode::euclidean_boundary;
    BoundaryRadii boundary = BoundaryRadii::reference;
    SolverKind solver = SolverKind::hybrid;
    double tol = 1e-8;
    long long max_iters = 1000000;
    double sampling = -1.0;
    double validate_tol = 1e-9;
    int assumption_depth = 2;
    TriangulationScheme scheme = TriangulationScheme::centroid_fan;
    std::string out;
    std::string svg;
    std::string highlight = "root";  // "root", "none", or dotted child indices below the host

    // Throws Error("cli-io", "config", ...) naming the offending field.
    void validate() const;

    // "key=value" lines echoed at the top of output files.
    std::string header() const;

    int host_type(const SubstitutionRule& rule) const;
    ConvergenceParams convergence_params(const SubstitutionRule& rule) const;
};

// Write to a sibling temporary file, then rename over `path`.
void write_atomic(const std::string& path, const std::string& content);

} // namespace tilepack
