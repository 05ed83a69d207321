#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace tilepack {

using Point = std::complex<double>;
using Polygon = std::vector<Point>;
using Triangle = std::array<int, 3>;

inline double dot(Point a, Point b) { return a.real() * b.real() + a.imag() * b.imag(); }
inline double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

double signed_area(std::span<const Point> poly);
inline double area(std::span<const Point> poly) { return std::abs(signed_area(poly)); }

// Area centroid (falls back to the vertex mean for degenerate input).
Point centroid(std::span<const Point> poly);
Point vertex_mean(std::span<const Point> pts);
double perimeter(std::span<const Point> poly);

// Largest pairwise distance, via the convex hull.
double diameter(std::span<const Point> pts);
std::vector<Point> convex_hull(std::span<const Point> pts);

struct Box {
    Point lo{0.0, 0.0};
    Point hi{0.0, 0.0};
    bool overlaps(const Box& o, double pad = 0.0) const;
};
Box bounding_box(std::span<const Point> pts);

double point_segment_distance(Point p, Point a, Point b);
double point_polyline_distance(Point p, std::span<const Point> closed);

// True when p lies on segment ab strictly between its endpoints, within eps.
bool on_open_segment(Point p, Point a, Point b, double eps);

// Proper crossing of the open segments (no shared endpoint, no touching).
bool segments_cross(Point a, Point b, Point c, Point d, double eps);

// Length of the overlap of two segments lying on a common line (0 if not collinear).
double collinear_overlap(Point a, Point b, Point c, Point d, double eps);

// Crossing-number test. Points on the boundary count as inside.
bool point_in_polygon(Point p, std::span<const Point> poly, double eps = 0.0);

bool is_simple(std::span<const Point> poly, double eps);

// Ear-clipping triangulation of a simple CCW polygon. Straight (collinear)
// vertices are kept as triangle vertices. Throws on failure.
std::vector<Triangle> ear_clip(std::span<const Point> poly);

// Area of the intersection of two convex CCW polygons (Sutherland-Hodgman).
double convex_intersection_area(std::span<const Point> a, std::span<const Point> b);

// Area of the intersection of two simple polygons of either orientation.
double intersection_area(std::span<const Point> a, std::span<const Point> b);

// Sample a closed polyline at arclength step `step`, always keeping its vertices.
std::vector<Point> resample_closed(std::span<const Point> closed, double step);

} // namespace tilepack
