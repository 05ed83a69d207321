#pragma once

#include "tilepack/complex.hpp"
#include "tilepack/geometry.hpp"

#include <limits>
#include <string>
#include <vector>

namespace tilepack {

enum class VertexTag { tile_corner, edge_point, tile_center, refinement };
std::string to_string(VertexTag t);

// Triangulation of the affine complex. Vertex ids 0..complex.vertex_count()-1
// are the welded tile corners, in the complex's numbering.
struct PackingComplex {
    std::vector<VertexTag> tags;
    std::vector<Triangle> triangles;            // CCW
    std::vector<std::vector<int>> flowers;      // CCW; closed for interior, open chain for boundary
    std::vector<std::vector<int>> petals;       // triangles around each vertex, CCW, aligned with flowers
    std::vector<char> boundary;
    std::vector<int> boundary_cycle;            // CCW
    std::vector<std::vector<int>> edge_chains;  // per complex edge, from edge.a to edge.b
    std::vector<int> tile_center;               // per complex tile
    std::vector<Point> reference_positions;     // Euclidean reference geometry (display only)
    int hex_depth = 0;

    std::size_t vertex_count() const { return tags.size(); }
    std::size_t interior_count() const;
    // Complex vertices a -> b along a shared tile edge, including both ends.
    std::vector<int> edge_chain(const TileComplex& cx, int a, int b) const;
    // Expand a closed cycle of complex vertices into packing vertices.
    std::vector<int> expand_cycle(const TileComplex& cx, const std::vector<int>& cycle) const;
    // Packing vertices around tile t, CCW.
    std::vector<int> tile_boundary(const TileComplex& cx, int t) const;
};

PackingComplex build_triangulation(const TileComplex& complex, int hex_depth);

enum class Geometry { euclidean, hyperbolic };
enum class PackingMode { disc_maximal, euclidean_boundary };
enum class SolverKind { hybrid, newton, uniform_neighbor };
// Boundary radii in euclid mode: all equal, or from reference segment lengths.
enum class BoundaryRadii { uniform, reference };

std::string to_string(Geometry g);
std::string to_string(PackingMode m);
std::string to_string(SolverKind s);
std::string to_string(BoundaryRadii b);
PackingMode parse_mode(const std::string& s);
SolverKind parse_solver(const std::string& s);
BoundaryRadii parse_boundary_radii(const std::string& s);

constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

// Angle at a circle of radius x in the triple with neighbours a and b.
// Hyperbolic radii may be infinite for a and b.
double triple_angle(Geometry g, double x, double a, double b);
double angle_sum(Geometry g, const PackingComplex& pc, const std::vector<double>& radii, int v);

struct SolveOptions {
    PackingMode mode = PackingMode::disc_maximal;
    std::vector<double> boundary_radii;  // euclidean_boundary; empty = mean edge length / 2
    double tol = 1e-8;
    long long max_iters = 1000000;       // sweep-equivalents
    SolverKind solver = SolverKind::hybrid;
    std::vector<double> initial_radii;   // optional warm start
};

struct Packing {
    Geometry geometry = Geometry::hyperbolic;
    PackingMode mode = PackingMode::disc_maximal;
    std::vector<double> radii;            // in `geometry`; infinite on the disc boundary
    std::vector<Point> centers;           // Euclidean centers of the drawn circles
    std::vector<double> euclidean_radii;  // Euclidean radii of the drawn circles
    double residual = 0.0;
    std::vector<double> history;          // residual per iteration
    long long iterations = 0;
    bool laid_out = false;
};

Packing solve_radii(const PackingComplex& pc, const SolveOptions& opts = {});

// Boundary radii proportional to the reference (Euclidean) lengths of the
// boundary segments: each boundary vertex gets a quarter of its two segments.
std::vector<double> reference_boundary_radii(const PackingComplex& pc);

struct LayoutOptions {
    int origin = -1;          // vertex placed at 0 (must have finite radius); -1 = deepest interior vertex
    int axis = -1;            // neighbour of origin placed on the positive real axis; -1 = first petal
    double tolerance = 1e-3;  // layout error threshold, relative to the mean radius
};

Packing layout(const PackingComplex& pc, const Packing& packing, const LayoutOptions& opts = {});

struct PackingDiagnostics {
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double max_tangency = 0.0;  // absolute, over all edges, Euclidean
    double mean_radius = 0.0;   // mean Euclidean radius
    double relative_tangency() const { return mean_radius > 0 ? max_tangency / mean_radius : max_tangency; }
};

PackingDiagnostics packing_error(const PackingComplex& pc, const Packing& packing);

struct Provenance {
    std::string rule;
    int depth = 0;
    int buffer = 0;
    int hex_depth = 0;
    std::string extra;  // free-form run configuration echo
};

std::string packing_to_json(const PackingComplex& pc, const Packing& packing, const Provenance& prov);
// Reads radii (and centers when present) back for resuming.
Packing packing_from_json(const PackingComplex& pc, const std::string& document);

} // namespace tilepack
