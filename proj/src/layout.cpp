#include "tilepack/errors.hpp"
#include "tilepack/packing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace tilepack {

namespace {

// Disc automorphism moving z0 to the origin, and its inverse.
Point to_origin(Point z, Point z0) { return (z - z0) / (1.0 - std::conj(z0) * z); }
Point from_origin(Point w, Point z0) { return (w + z0) / (1.0 + std::conj(z0) * w); }

struct Circle {
    Point c{0.0, 0.0};
    double r = 0.0;
};

// Euclidean picture of a hyperbolic circle with hyperbolic center z.
Circle euclidean_of(Point z, double r) {
    const double t = std::tanh(0.5 * r);
    const double m = std::abs(z);
    if (m == 0.0) return {z, t};
    const double x1 = (m + t) / (1.0 + m * t), x2 = (m - t) / (1.0 - m * t);
    return {z / m * (0.5 * (x1 + x2)), 0.5 * (x1 - x2)};
}

// Horocycle at the ideal point zeta tangent to the circle (cu, ru).
Circle horocycle_touching(Point zeta, const Circle& u) {
    const Point w = zeta - u.c;
    const double rho = (std::norm(w) - u.r * u.r) / (2.0 * (std::real(std::conj(w) * zeta) + u.r));
    return {(1.0 - rho) * zeta, rho};
}

class Layout {
public:
    Layout(const PackingComplex& pc, const Packing& p) : pc_(pc), p_(p), n_(pc.vertex_count()) {
        placed_.assign(n_, 0);
        pos_.assign(n_, Point{0.0, 0.0});
        circ_.assign(n_, Circle{});
    }

    Packing run(const LayoutOptions& opts) {
        if (p_.radii.size() != n_) throw Error("circle-packing", "layout", "radii size does not match the complex");
        int origin = opts.origin < 0 ? deepest_vertex() : opts.origin;
        if (origin < 0)
            for (std::size_t v = 0; v < n_ && origin < 0; ++v)
                if (std::isfinite(p_.radii[v])) origin = static_cast<int>(v);
        if (origin < 0 || origin >= static_cast<int>(n_) || !finite(origin))
            throw Error("circle-packing", "layout", "layout origin must be a vertex with finite radius");
        const auto& fl = pc_.flowers[origin];
        int axis = opts.axis < 0 ? fl.front() : opts.axis;
        if (std::find(fl.begin(), fl.end(), axis) == fl.end())
            throw Error("circle-packing", "layout", "axis vertex is not a neighbour of the origin");

        set_finite(origin, Point{0.0, 0.0});
        if (hyperbolic()) {
            if (finite(axis)) set_finite(axis, Point{std::tanh(0.5 * (r(origin) + r(axis))), 0.0});
            else set_ideal(axis, Point{1.0, 0.0}, origin);
        } else {
            set_finite(axis, Point{r(origin) + r(axis), 0.0});
        }
        queue_.push_back(origin);
        if (finite(axis)) queue_.push_back(axis);

        bool progress = true;
        while (progress) {
            while (!queue_.empty()) {
                const int u = queue_.front();
                queue_.pop_front();
                expand(u);
            }
            progress = false;
            for (const Triangle& t : pc_.triangles) {
                const int k = placed_[t[0]] + placed_[t[1]] + placed_[t[2]];
                if (k != 2) continue;
                int rot = 0;
                while (placed_[t[rot]]) ++rot;
                const int w = t[rot], a = t[(rot + 1) % 3], b = t[(rot + 2) % 3];
                // (a, b, w) is CCW.
                if (finite(a)) place(a, b, w, +1.0);
                else if (finite(b)) place(b, a, w, -1.0);
                else place_between_ideals(a, b, w);
                if (finite(w)) queue_.push_back(w);
                progress = true;
            }
        }
        for (std::size_t v = 0; v < n_; ++v)
            if (!placed_[v]) throw Error("circle-packing", "layout", "vertex " + std::to_string(v) + " could not be placed");

        Packing out = p_;
        out.centers.resize(n_);
        out.euclidean_radii.resize(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            out.centers[v] = circ_[v].c;
            out.euclidean_radii[v] = circ_[v].r;
        }
        out.laid_out = true;
        const PackingDiagnostics d = packing_error(pc_, out);
        if (d.relative_tangency() > opts.tolerance) {
            std::ostringstream os;
            os << "inconsistent placement: tangency error " << d.max_tangency << " (" << d.relative_tangency()
               << " of the mean radius) exceeds " << opts.tolerance << "; radii are probably unsolved";
            throw Error("circle-packing", "layout", os.str());
        }
        return out;
    }

private:
    // Finite vertex farthest (in edges) from the boundary; -1 if none.
    int deepest_vertex() const {
        std::vector<int> dist(n_, -1);
        std::deque<int> q;
        for (std::size_t v = 0; v < n_; ++v)
            if (pc_.boundary[v]) {
                dist[v] = 0;
                q.push_back(static_cast<int>(v));
            }
        while (!q.empty()) {
            const int u = q.front();
            q.pop_front();
            for (int w : pc_.flowers[u])
                if (dist[w] < 0) {
                    dist[w] = dist[u] + 1;
                    q.push_back(w);
                }
        }
        int best = -1;
        for (std::size_t v = 0; v < n_; ++v)
            if (std::isfinite(p_.radii[v]) && (best < 0 || dist[v] > dist[best])) best = static_cast<int>(v);
        return best;
    }

    const PackingComplex& pc_;
    const Packing& p_;
    std::size_t n_;
    std::vector<char> placed_;
    std::vector<Point> pos_;  // hyperbolic center, ideal point, or Euclidean center
    std::vector<Circle> circ_;
    std::deque<int> queue_;

    bool hyperbolic() const { return p_.geometry == Geometry::hyperbolic; }
    double r(int v) const { return p_.radii[v]; }
    bool finite(int v) const { return std::isfinite(p_.radii[v]); }

    void set_finite(int v, Point z) {
        pos_[v] = z;
        circ_[v] = hyperbolic() ? euclidean_of(z, r(v)) : Circle{z, r(v)};
        placed_[v] = 1;
    }

    void set_ideal(int v, Point zeta, int pivot) {
        zeta /= std::abs(zeta);
        pos_[v] = zeta;
        circ_[v] = horocycle_touching(zeta, circ_[pivot]);
        placed_[v] = 1;
    }

    // Place w tangent to u (finite, pivot) and v; sign +1 when (u, v, w) is CCW.
    void place(int u, int v, int w, double sign) {
        const double theta = triple_angle(p_.geometry, r(u), r(v), r(w));
        if (!hyperbolic()) {
            const double dir = std::arg(pos_[v] - pos_[u]);
            set_finite(w, pos_[u] + std::polar(r(u) + r(w), dir + sign * theta));
            return;
        }
        const Point vp = to_origin(pos_[v], pos_[u]);
        const double phi = std::arg(vp) + sign * theta;
        if (finite(w)) set_finite(w, from_origin(std::polar(std::tanh(0.5 * (r(u) + r(w))), phi), pos_[u]));
        else set_ideal(w, from_origin(std::polar(1.0, phi), pos_[u]), u);
    }

    // Finite w tangent to two tangent horocycles a, b with (a, b, w) CCW: the
    // tangent circles form a one-parameter family in the Euclidean radius, and
    // bisection matches the hyperbolic radius.
    void place_between_ideals(int a, int b, int w) {
        const Circle A = circ_[a], B = circ_[b];
        const double d = std::abs(B.c - A.c);
        const Point e = (B.c - A.c) / d;
        auto circle_for = [&](double rho) {
            const double R1 = rho + A.r, R2 = rho + B.r;
            const double x = (R1 * R1 - R2 * R2 + d * d) / (2.0 * d);
            const double h = std::sqrt(std::max(0.0, R1 * R1 - x * x));
            return Circle{A.c + e * x + e * Point{0.0, 1.0} * h, rho};
        };
        auto hyp_radius = [&](const Circle& c) {
            const double m = std::abs(c.c);
            if (m + c.r >= 1.0) return kInfiniteRadius;
            return std::atanh(m + c.r) - std::atanh(m - c.r);
        };
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (hyp_radius(circle_for(mid)) < r(w)) lo = mid;
            else hi = mid;
        }
        const Circle c = circle_for(0.5 * (lo + hi));
        const double m = std::abs(c.c);
        const double center = std::tanh(0.5 * (std::atanh(m + c.r) + std::atanh(m - c.r)));
        set_finite(w, m == 0.0 ? Point{0.0, 0.0} : c.c / m * center);
    }

    void expand(int u) {
        if (!finite(u)) return;
        const auto& f = pc_.flowers[u];
        const int k = static_cast<int>(f.size());
        int j = -1;
        for (int i = 0; i < k && j < 0; ++i)
            if (placed_[f[i]]) j = i;
        if (j < 0) return;
        auto visit = [&](int w, int from, double sign) {
            if (placed_[w]) return;
            place(u, from, w, sign);
            if (finite(w)) queue_.push_back(w);
        };
        if (!pc_.boundary[u]) {
            for (int s = 1; s < k; ++s) visit(f[(j + s) % k], f[(j + s - 1) % k], +1.0);
        } else {
            for (int i = j + 1; i < k; ++i) visit(f[i], f[i - 1], +1.0);
            for (int i = j - 1; i >= 0; --i) visit(f[i], f[i + 1], -1.0);
        }
    }
};

} // namespace

Packing layout(const PackingComplex& pc, const Packing& packing, const LayoutOptions& opts) {
    Layout l(pc, packing);
    return l.run(opts);
}

} // namespace tilepack
