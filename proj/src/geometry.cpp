#include "tilepack/geometry.hpp"

#include "tilepack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tilepack {

double signed_area(std::span<const Point> poly) {
    const std::size_t n = poly.size();
    if (n < 3) return 0.0;
    // Shift to the first vertex to keep the shoelace sum well conditioned.
    const Point o = poly[0];
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) s += cross(poly[i] - o, poly[i + 1] - o);
    return 0.5 * s;
}

Point vertex_mean(std::span<const Point> pts) {
    Point s{0.0, 0.0};
    for (const Point& p : pts) s += p;
    return pts.empty() ? s : s / static_cast<double>(pts.size());
}

Point centroid(std::span<const Point> poly) {
    const std::size_t n = poly.size();
    if (n < 3) return vertex_mean(poly);
    const Point o = poly[0];
    double a = 0.0;
    Point c{0.0, 0.0};
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Point p = poly[i] - o, q = poly[i + 1] - o;
        const double w = cross(p, q);
        a += w;
        c += w * (p + q);
    }
    if (std::abs(a) < 1e-300) return vertex_mean(poly);
    return o + c / (3.0 * a);
}

double perimeter(std::span<const Point> poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) s += std::abs(poly[(i + 1) % poly.size()] - poly[i]);
    return s;
}

std::vector<Point> convex_hull(std::span<const Point> pts) {
    std::vector<Point> p(pts.begin(), pts.end());
    std::sort(p.begin(), p.end(), [](Point a, Point b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return p;
    std::vector<Point> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && orient(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && orient(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return h;
}

double diameter(std::span<const Point> pts) {
    const std::vector<Point> h = convex_hull(pts);
    double d = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = i + 1; j < h.size(); ++j) d = std::max(d, std::abs(h[i] - h[j]));
    return d;
}

bool Box::overlaps(const Box& o, double pad) const {
    return lo.real() <= o.hi.real() + pad && o.lo.real() <= hi.real() + pad &&
           lo.imag() <= o.hi.imag() + pad && o.lo.imag() <= hi.imag() + pad;
}

Box bounding_box(std::span<const Point> pts) {
    Box b;
    if (pts.empty()) return b;
    double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
    for (const Point& p : pts) {
        x0 = std::min(x0, p.real());
        x1 = std::max(x1, p.real());
        y0 = std::min(y0, p.imag());
        y1 = std::max(y1, p.imag());
    }
    b.lo = {x0, y0};
    b.hi = {x1, y1};
    return b;
}

double point_segment_distance(Point p, Point a, Point b) {
    const Point d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    const double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

double point_polyline_distance(Point p, std::span<const Point> closed) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = closed.size();
    for (std::size_t i = 0; i < n; ++i)
        best = std::min(best, point_segment_distance(p, closed[i], closed[(i + 1) % n]));
    return best;
}

bool on_open_segment(Point p, Point a, Point b, double eps) {
    if (std::abs(p - a) <= eps || std::abs(p - b) <= eps) return false;
    return point_segment_distance(p, a, b) <= eps;
}

bool segments_cross(Point a, Point b, Point c, Point d, double eps) {
    const double lab = std::abs(b - a), lcd = std::abs(d - c);
    if (lab == 0.0 || lcd == 0.0) return false;
    // Signed distances of each endpoint from the other segment's line.
    const double c1 = orient(a, b, c) / lab, c2 = orient(a, b, d) / lab;
    const double c3 = orient(c, d, a) / lcd, c4 = orient(c, d, b) / lcd;
    return ((c1 > eps && c2 < -eps) || (c1 < -eps && c2 > eps)) &&
           ((c3 > eps && c4 < -eps) || (c3 < -eps && c4 > eps));
}

double collinear_overlap(Point a, Point b, Point c, Point d, double eps) {
    const double len = std::abs(b - a);
    if (len == 0.0) return 0.0;
    if (std::abs(orient(a, b, c)) / len > eps || std::abs(orient(a, b, d)) / len > eps) return 0.0;
    const Point u = (b - a) / len;
    double t0 = dot(c - a, u), t1 = dot(d - a, u);
    if (t0 > t1) std::swap(t0, t1);
    return std::max(0.0, std::min(len, t1) - std::max(0.0, t0));
}

bool point_in_polygon(Point p, std::span<const Point> poly, double eps) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (point_segment_distance(p, poly[i], poly[(i + 1) % n]) <= eps) return true;
    bool in = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point a = poly[i], b = poly[j];
        if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
            const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (p.real() < x) in = !in;
        }
    }
    return in;
}

bool is_simple(std::span<const Point> poly, double eps) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(poly[i] - poly[j]) <= eps) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly[i], b = poly[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Point c = poly[j], d = poly[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // Adjacent edges must not fold back over each other.
                const Point shared = (j == i + 1) ? b : a;
                const Point other1 = (j == i + 1) ? a : b;
                const Point other2 = (j == i + 1) ? d : c;
                if (collinear_overlap(shared, other1, shared, other2, eps) > eps) return false;
                continue;
            }
            if (segments_cross(a, b, c, d, eps)) return false;
            if (on_open_segment(c, a, b, eps) || on_open_segment(d, a, b, eps) ||
                on_open_segment(a, c, d, eps) || on_open_segment(b, c, d, eps))
                return false;
        }
    }
    return true;
}

namespace {

bool in_closed_triangle(Point p, Point a, Point b, Point c, double eps) {
    return orient(a, b, p) >= -eps && orient(b, c, p) >= -eps && orient(c, a, p) >= -eps;
}

} // namespace

std::vector<Triangle> ear_clip(std::span<const Point> poly_in) {
    const int n = static_cast<int>(poly_in.size());
    if (n < 3) throw Error("geometry", "ear_clip", "polygon has fewer than 3 vertices");
    std::vector<Point> poly(poly_in.begin(), poly_in.end());
    const bool ccw = signed_area(poly) > 0;
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = ccw ? i : n - 1 - i;

    const double scale = diameter(poly);
    const double eps = 1e-12 * scale * scale;
    std::vector<Triangle> out;
    out.reserve(n - 2);
    std::vector<int> ring = idx;
    while (ring.size() > 3) {
        const int m = static_cast<int>(ring.size());
        int best = -1;
        double best_quality = -1.0;
        for (int k = 0; k < m; ++k) {
            const Point a = poly[ring[(k + m - 1) % m]], b = poly[ring[k]], c = poly[ring[(k + 1) % m]];
            const double o = orient(a, b, c);
            if (o <= eps) continue;
            bool clear = true;
            for (int t = 0; t < m && clear; ++t) {
                if (t == k || t == (k + 1) % m || t == (k + m - 1) % m) continue;
                const Point p = poly[ring[t]];
                if (p == a || p == b || p == c) continue;
                if (in_closed_triangle(p, a, b, c, eps)) clear = false;
            }
            if (!clear) continue;
            // Prefer the fattest ear: ratio of area to squared longest side.
            const double longest = std::max({std::norm(b - a), std::norm(c - b), std::norm(a - c)});
            const double quality = o / longest;
            if (quality > best_quality + 1e-12) {
                best_quality = quality;
                best = k;
            }
        }
        if (best < 0) throw Error("geometry", "ear_clip", "no ear found; polygon is not simple");
        out.push_back({ring[(best + m - 1) % m], ring[best], ring[(best + 1) % m]});
        ring.erase(ring.begin() + best);
    }
    if (orient(poly[ring[0]], poly[ring[1]], poly[ring[2]]) <= eps)
        throw Error("geometry", "ear_clip", "degenerate final triangle");
    out.push_back({ring[0], ring[1], ring[2]});
    return out;
}

double convex_intersection_area(std::span<const Point> a, std::span<const Point> b) {
    std::vector<Point> out(a.begin(), a.end()), in;
    const std::size_t m = b.size();
    for (std::size_t e = 0; e < m && !out.empty(); ++e) {
        const Point p = b[e], q = b[(e + 1) % m];
        in.swap(out);
        out.clear();
        const std::size_t k = in.size();
        for (std::size_t i = 0; i < k; ++i) {
            const Point s = in[i], t = in[(i + 1) % k];
            const double ds = orient(p, q, s), dt = orient(p, q, t);
            if (ds >= 0) out.push_back(s);
            if ((ds >= 0) != (dt >= 0)) out.push_back(s + (t - s) * (ds / (ds - dt)));
        }
    }
    return out.size() < 3 ? 0.0 : std::max(0.0, signed_area(out));
}

double intersection_area(std::span<const Point> a, std::span<const Point> b) {
    if (!bounding_box(a).overlaps(bounding_box(b))) return 0.0;
    auto pieces = [](std::span<const Point> p) {
        std::vector<std::array<Point, 3>> tris;
        for (const Triangle& t : ear_clip(p)) tris.push_back({p[t[0]], p[t[1]], p[t[2]]});
        return tris;
    };
    const auto ta = pieces(a), tb = pieces(b);
    double s = 0.0;
    for (const auto& x : ta) {
        const Box bx = bounding_box(x);
        for (const auto& y : tb)
            if (bx.overlaps(bounding_box(y))) s += convex_intersection_area(x, y);
    }
    return s;
}

std::vector<Point> resample_closed(std::span<const Point> closed, double step) {
    std::vector<Point> out;
    const std::size_t n = closed.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = closed[i], b = closed[(i + 1) % n];
        const double len = std::abs(b - a);
        const int pieces = std::max(1, static_cast<int>(std::ceil(len / step)));
        for (int k = 0; k < pieces; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / pieces));
    }
    return out;
}

} // namespace tilepack
