#pragma once

#include "tilepack/complex.hpp"
#include "tilepack/geometry.hpp"
#include "tilepack/packing.hpp"
#include "tilepack/substitution.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tilepack {

struct Shape {
    std::vector<Point> points;  // closed polyline, closure implicit
    int a = 0;                  // index of corner a
    int b = 1;                  // index of corner b
};

// Polyline through the circle centers along the aggregate boundary.
Shape aggregate_shape(const TileComplex& cx, const PackingComplex& pc, const Packing& packing,
                      const AggregateBoundary& boundary);

// The same boundary traced through reference (Euclidean) positions.
Shape euclidean_aggregate_shape(const TileComplex& cx, const AggregateBoundary& boundary);

// The ancestor tile's own corners as a shape.
Shape euclidean_tile_shape(const SubstitutionRule& rule, int type, const SimilarityMap& map = {});

// Unique orientation-preserving similarity sending a -> 0 and b -> 1.
Shape normalize_shape(const Shape& s);
SimilarityMap normalizing_map(const Shape& s);
Shape transform_shape(const Shape& s, const SimilarityMap& m);

double shape_diameter(const Shape& s);

// Symmetric Hausdorff distance between the boundary curves. Both curves are
// resampled at arclength step `sampling` and each sample is measured exactly
// against the other polyline's segments.
double hausdorff_distance(const Shape& A, const Shape& B, double sampling);
double hausdorff_distance(const std::vector<Point>& A, const std::vector<Point>& B, double sampling);

struct ConvergenceParams {
    int host = 0;  // prototile type index hosting the buffered patch
    RootSelector selector;
    int hex_depth = 1;
    PackingMode mode = PackingMode::euclidean_boundary;
    BoundaryRadii boundary = BoundaryRadii::reference;
    double tol = 1e-8;
    long long max_iters = 1000000;
    SolverKind solver = SolverKind::hybrid;
    double sampling = -1.0;  // <= 0: 1e-3 x diameter of the normalized target
};

struct ConvergenceRow {
    int n = 0;
    std::size_t tiles = 0;            // tiles in the aggregate
    std::size_t patch_tiles = 0;      // tiles in the whole packed patch
    std::size_t vertices = 0;         // packing vertices
    double packing_residual = 0.0;
    double d_n = 0.0;
    double c_n = 0.0;
    double seconds = 0.0;
};

struct ConvergenceSeries {
    std::string rule;
    ConvergenceParams params;
    std::vector<ConvergenceRow> rows;
    std::optional<std::string> failure;  // set when the series stopped early
};

// Everything built for one aggregate: patch, complex, packing and shapes.
struct AggregateRun {
    BufferedPatch buffered;
    TileComplex complex;
    AggregateBoundary boundary;
    PackingComplex packing_complex;
    Packing packing;
    Shape conformal;   // normalized
    Shape euclidean;   // normalized root tile
    double sampling = 0.0;
    double d = 0.0;    // Hausdorff distance between the two normalized shapes
    double c = 0.0;    // d / diameter(euclidean)
};

AggregateRun run_aggregate(const SubstitutionRule& rule, int n, const ConvergenceParams& params);

ConvergenceSeries shape_convergence(const SubstitutionRule& rule, int n_max, const ConvergenceParams& params);

std::string series_csv(const ConvergenceSeries& series, const std::string& header_comment = "");

} // namespace tilepack
