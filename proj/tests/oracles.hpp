#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's geometry routines.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using P = std::complex<double>;

inline double seg_dist(P p, P a, P b) {
    const P d = b - a;
    const double L2 = std::norm(d);
    double t = L2 > 0 ? ((p - a) * std::conj(d)).real() / L2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

inline double curve_dist(P p, const std::vector<P>& c) {
    double best = INFINITY;
    for (std::size_t i = 0; i < c.size(); ++i) best = std::min(best, seg_dist(p, c[i], c[(i + 1) % c.size()]));
    return best;
}

inline std::vector<P> dense(const std::vector<P>& c, double step) {
    std::vector<P> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const P a = c[i], b = c[(i + 1) % c.size()];
        const int k = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / step)));
        for (int j = 0; j < k; ++j) out.push_back(a + (b - a) * (double(j) / k));
    }
    return out;
}

// Dense-sampling brute force: every sample against every segment.
inline double hausdorff(const std::vector<P>& A, const std::vector<P>& B, double step) {
    double h = 0.0;
    for (P p : dense(A, step)) h = std::max(h, curve_dist(p, B));
    for (P p : dense(B, step)) h = std::max(h, curve_dist(p, A));
    return h;
}

// Euclidean triple angle at v by the law of cosines.
inline double cosine_angle(double rv, double ru, double rw) {
    const double a = rv + ru, b = rv + rw, c = ru + rw;
    return std::acos(std::clamp((a * a + b * b - c * c) / (2 * a * b), -1.0, 1.0));
}

// Hyperbolic triple angle by the hyperbolic law of cosines.
inline double hyperbolic_angle(double rv, double ru, double rw) {
    const double a = rv + ru, b = rv + rw, c = ru + rw;
    const double x = (std::cosh(a) * std::cosh(b) - std::cosh(c)) / (std::sinh(a) * std::sinh(b));
    return std::acos(std::clamp(x, -1.0, 1.0));
}

// Max/min stretch of the linear part over a grid of directions.
inline double stretch_dilatation(const std::array<P, 3>& s, const std::array<P, 3>& d, int steps = 200000) {
    // Columns: images of e1, e2 under L, solved from L(s1-s0) = d1-d0, L(s2-s0) = d2-d0.
    const P u1 = s[1] - s[0], u2 = s[2] - s[0], v1 = d[1] - d[0], v2 = d[2] - d[0];
    const double det = u1.real() * u2.imag() - u2.real() * u1.imag();
    // L = V U^{-1}
    const double i00 = u2.imag() / det, i01 = -u2.real() / det, i10 = -u1.imag() / det, i11 = u1.real() / det;
    const P col0 = v1 * i00 + v2 * i10, col1 = v1 * i01 + v2 * i11;
    double hi = 0.0, lo = INFINITY;
    for (int k = 0; k < steps; ++k) {
        const double t = std::numbers::pi * k / steps;
        const double len = std::abs(col0 * std::cos(t) + col1 * std::sin(t));
        hi = std::max(hi, len);
        lo = std::min(lo, len);
    }
    return hi / lo;
}

inline double shoelace(const std::vector<P>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const P a = c[i], b = c[(i + 1) % c.size()];
        s += a.real() * b.imag() - b.real() * a.imag();
    }
    return 0.5 * s;
}

inline int winding(P p, const std::vector<P>& c) {
    int w = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const P a = c[i], b = c[(i + 1) % c.size()];
        const double side = (b - a).real() * (p - a).imag() - (p - a).real() * (b - a).imag();
        if (a.imag() <= p.imag()) {
            if (b.imag() > p.imag() && side > 0) ++w;
        } else if (b.imag() <= p.imag() && side < 0) {
            --w;
        }
    }
    return w;
}

// Star-shaped random polygon around c, CCW.
inline std::vector<P> random_polygon(std::mt19937_64& rng, P c, double r, int n) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<double> ang(n);
    for (double& a : ang) a = 2 * std::numbers::pi * U(rng);
    std::sort(ang.begin(), ang.end());
    std::vector<P> out;
    for (double a : ang) out.push_back(c + std::polar(r * (0.4 + 0.6 * U(rng)), a));
    return out;
}

} // namespace oracle
