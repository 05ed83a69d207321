#include "tilepack/shape.hpp"

#include "tilepack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tilepack {

Shape aggregate_shape(const TileComplex& cx, const PackingComplex& pc, const Packing& packing,
                      const AggregateBoundary& ab) {
    if (!packing.laid_out) throw Error("shape-metrics", "aggregate_shape", "packing has not been laid out");
    Shape s;
    s.a = s.b = -1;
    const std::size_t k = ab.path.size();
    for (std::size_t i = 0; i < k; ++i) {
        if (static_cast<int>(i) == ab.base_a) s.a = static_cast<int>(s.points.size());
        if (static_cast<int>(i) == ab.base_b) s.b = static_cast<int>(s.points.size());
        const std::vector<int> chain = pc.edge_chain(cx, ab.path[i], ab.path[(i + 1) % k]);
        for (std::size_t j = 0; j + 1 < chain.size(); ++j) s.points.push_back(packing.centers[chain[j]]);
    }
    if (s.a < 0 || s.b < 0) throw Error("shape-metrics", "aggregate_shape", "unmatched corner vertex");
    return s;
}

Shape euclidean_aggregate_shape(const TileComplex& cx, const AggregateBoundary& ab) {
    Shape s;
    for (int v : ab.path) s.points.push_back(cx.positions[v]);
    s.a = ab.base_a;
    s.b = ab.base_b;
    return s;
}

Shape euclidean_tile_shape(const SubstitutionRule& rule, int type, const SimilarityMap& map) {
    Shape s;
    s.points = placed_corners(rule, type, map);
    const auto base = rule.prototiles.at(type).base_corner_indices();
    if (base[0] < 0 || base[1] < 0) throw Error("shape-metrics", "euclidean_tile_shape", "base corners are not declared");
    s.a = base[0];
    s.b = base[1];
    return s;
}

SimilarityMap normalizing_map(const Shape& s) {
    if (s.a < 0 || s.b < 0 || s.a >= static_cast<int>(s.points.size()) || s.b >= static_cast<int>(s.points.size()))
        throw Error("shape-metrics", "normalize_shape", "marked corners out of range");
    const Point a = s.points[s.a], b = s.points[s.b];
    if (std::abs(b - a) == 0.0 || s.a == s.b) throw Error("shape-metrics", "normalize_shape", "coincident corners");
    const Point f = 1.0 / (b - a);
    return {f, -a * f};
}

Shape transform_shape(const Shape& s, const SimilarityMap& m) {
    Shape out = s;
    for (Point& p : out.points) p = m(p);
    return out;
}

Shape normalize_shape(const Shape& s) {
    Shape out = transform_shape(s, normalizing_map(s));
    out.points[out.a] = {0.0, 0.0};
    out.points[out.b] = {1.0, 0.0};
    return out;
}

double shape_diameter(const Shape& s) { return diameter(s.points); }

namespace {

double directed(const std::vector<Point>& samples, const std::vector<Point>& poly) {
    // Segments bucketed by a uniform grid; each sample scans outward ring by
    // ring until the ring distance exceeds the best distance found.
    const std::size_t m = poly.size();
    const Box box = bounding_box(poly);
    const double w = std::max(box.hi.real() - box.lo.real(), box.hi.imag() - box.lo.imag());
    const int g = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(m))));
    const double h = std::max(w / g, 1e-300);
    std::vector<std::vector<int>> cells(static_cast<std::size_t>(g) * g);
    auto cx = [&](double x) { return std::clamp(static_cast<int>((x - box.lo.real()) / h), 0, g - 1); };
    auto cy = [&](double y) { return std::clamp(static_cast<int>((y - box.lo.imag()) / h), 0, g - 1); };
    for (std::size_t i = 0; i < m; ++i) {
        const Point p = poly[i], q = poly[(i + 1) % m];
        const int x0 = cx(std::min(p.real(), q.real())), x1 = cx(std::max(p.real(), q.real()));
        const int y0 = cy(std::min(p.imag(), q.imag())), y1 = cy(std::max(p.imag(), q.imag()));
        for (int x = x0; x <= x1; ++x)
            for (int y = y0; y <= y1; ++y) cells[static_cast<std::size_t>(x) * g + y].push_back(static_cast<int>(i));
    }
    double worst = 0.0;
    for (const Point& s : samples) {
        const int sx = cx(s.real()), sy = cy(s.imag());
        // Distance from s to the clamped cell region is a lower bound for ring k.
        const double outside = std::max({box.lo.real() - s.real(), s.real() - box.hi.real(),
                                         box.lo.imag() - s.imag(), s.imag() - box.hi.imag(), 0.0});
        double best = std::numeric_limits<double>::infinity();
        for (int ring = 0; ring <= g; ++ring) {
            if (ring > 0 && std::max((ring - 1) * h, outside) > best) break;
            for (int x = sx - ring; x <= sx + ring; ++x)
                for (int y = sy - ring; y <= sy + ring; ++y) {
                    if (x < 0 || y < 0 || x >= g || y >= g) continue;
                    if (std::max(std::abs(x - sx), std::abs(y - sy)) != ring) continue;
                    for (int i : cells[static_cast<std::size_t>(x) * g + y])
                        best = std::min(best, point_segment_distance(s, poly[i], poly[(i + 1) % m]));
                }
        }
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

double hausdorff_distance(const std::vector<Point>& A, const std::vector<Point>& B, double sampling) {
    if (!(sampling > 0.0)) throw Error("shape-metrics", "hausdorff_distance", "sampling step must be > 0");
    if (A.empty() || B.empty()) throw Error("shape-metrics", "hausdorff_distance", "empty shape");
    const std::vector<Point> sa = resample_closed(A, sampling), sb = resample_closed(B, sampling);
    return std::max(directed(sa, B), directed(sb, A));
}

double hausdorff_distance(const Shape& A, const Shape& B, double sampling) {
    return hausdorff_distance(A.points, B.points, sampling);
}

} // namespace tilepack
