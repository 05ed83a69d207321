#pragma once

#include "tilepack/geometry.hpp"
#include "tilepack/substitution.hpp"

#include <array>
#include <string>
#include <vector>

namespace tilepack {

enum class TriangulationScheme { centroid_fan, ear_clip };

std::string to_string(TriangulationScheme s);
TriangulationScheme parse_scheme(const std::string& s);

struct TriangulatedPolygon {
    enum class Frame { prototile, regular_polygon };

    // Boundary vertices first (CCW), then interior vertices.
    std::vector<Point> positions;
    std::vector<char> is_corner;  // per boundary vertex
    int boundary_count = 0;
    std::vector<Triangle> triangles;
    Frame frame = Frame::prototile;

    int interior_count() const { return static_cast<int>(positions.size()) - boundary_count; }
};

TriangulatedPolygon triangulate_prototile(const Prototile& p, TriangulationScheme scheme = TriangulationScheme::centroid_fan);

// Unit-side regular n-gon with corner 0 at 0 and corner 1 at 1, CCW.
std::vector<Point> regular_polygon(int n);

// Max over interior vertices of |x_v - mean of neighbours|.
double barycentric_residual(const TriangulatedPolygon& t);

// Boundary corners go to the regular n-gon's corners in order (other boundary
// vertices by arclength); interior vertices solve the barycentric system.
TriangulatedPolygon tutte_embed(const TriangulatedPolygon& t);

// sigma_max / sigma_min of the affine map taking src to dst vertex-wise.
double triangle_dilatation(const std::array<Point, 3>& src, const std::array<Point, 3>& dst);

struct DilatationReport {
    struct Entry {
        int prototile = 0;  // type index
        int triangle = 0;
        double kappa = 1.0;
    };
    TriangulationScheme scheme = TriangulationScheme::centroid_fan;
    std::vector<Entry> entries;
    std::vector<double> per_prototile;
    std::vector<double> tutte_residual;
    double kappa = 1.0;
};

DilatationReport rule_kappa(const SubstitutionRule& rule, TriangulationScheme scheme = TriangulationScheme::centroid_fan);

std::string kappa_csv(const DilatationReport& report, const SubstitutionRule& rule);

} // namespace tilepack
