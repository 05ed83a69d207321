#include "tilepack/affine_qc.hpp"

#include "tilepack/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace tilepack {

std::string to_string(TriangulationScheme s) {
    return s == TriangulationScheme::centroid_fan ? "centroid_fan" : "ear_clip";
}

TriangulationScheme parse_scheme(const std::string& s) {
    if (s == "centroid_fan" || s == "fan" || s == "centroid") return TriangulationScheme::centroid_fan;
    if (s == "ear_clip" || s == "ear") return TriangulationScheme::ear_clip;
    throw Error("affine-qc", "parse_scheme", "unknown triangulation scheme '" + s + "'");
}

TriangulatedPolygon triangulate_prototile(const Prototile& p, TriangulationScheme scheme) {
    const int n = p.side_count();
    if (n < 3 || area(p.corners) <= 0.0)
        throw Error("affine-qc", "triangulate_prototile", "degenerate polygon '" + p.label + "'");
    TriangulatedPolygon t;
    t.positions = p.corners;
    t.is_corner.assign(n, 1);
    t.boundary_count = n;

    if (scheme == TriangulationScheme::centroid_fan) {
        const Point c = centroid(p.vertices);
        // The fan is valid when every triangle (c, corner_i, corner_i+1) is
        // positively oriented, i.e. the polygon is star-shaped from c.
        const double tiny = 1e-12 * std::norm(diameter(p.corners));
        bool star = true;
        for (int i = 0; i < n && star; ++i) star = orient(c, p.corners[i], p.corners[(i + 1) % n]) > tiny;
        if (star) {
            t.positions.push_back(c);
            for (int i = 0; i < n; ++i) t.triangles.push_back({n, i, (i + 1) % n});
            return t;
        }
    }
    t.triangles = ear_clip(p.corners);
    return t;
}

std::vector<Point> regular_polygon(int n) {
    std::vector<Point> out(n);
    out[0] = 0.0;
    for (int k = 1; k < n; ++k) out[k] = out[k - 1] + std::polar(1.0, 2.0 * std::numbers::pi * (k - 1) / n);
    return out;
}

namespace {

std::vector<std::vector<int>> neighbours(const TriangulatedPolygon& t) {
    std::vector<std::vector<int>> nb(t.positions.size());
    for (const Triangle& tr : t.triangles)
        for (int k = 0; k < 3; ++k) {
            nb[tr[k]].push_back(tr[(k + 1) % 3]);
            nb[tr[k]].push_back(tr[(k + 2) % 3]);
        }
    for (auto& v : nb) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return nb;
}

} // namespace

double barycentric_residual(const TriangulatedPolygon& t) {
    const auto nb = neighbours(t);
    double worst = 0.0;
    for (std::size_t v = t.boundary_count; v < t.positions.size(); ++v) {
        if (nb[v].empty()) return std::numeric_limits<double>::infinity();
        Point m{0.0, 0.0};
        for (int u : nb[v]) m += t.positions[u];
        worst = std::max(worst, std::abs(t.positions[v] - m / static_cast<double>(nb[v].size())));
    }
    return worst;
}

TriangulatedPolygon tutte_embed(const TriangulatedPolygon& src) {
    TriangulatedPolygon out = src;
    out.frame = TriangulatedPolygon::Frame::regular_polygon;
    const int nb_count = src.boundary_count;
    std::vector<int> corner_ids;
    for (int i = 0; i < nb_count; ++i)
        if (src.is_corner.empty() || src.is_corner[i]) corner_ids.push_back(i);
    const int n = static_cast<int>(corner_ids.size());
    if (n < 3) throw Error("affine-qc", "tutte_embed", "fewer than 3 boundary corners");
    const std::vector<Point> target = regular_polygon(n);

    // Boundary: corners to corners, side-interior vertices by arclength.
    for (int k = 0; k < n; ++k) {
        const int i0 = corner_ids[k], i1 = corner_ids[(k + 1) % n];
        const int span = (i1 - i0 + nb_count) % nb_count == 0 ? nb_count : (i1 - i0 + nb_count) % nb_count;
        double total = 0.0;
        std::vector<double> acc{0.0};
        for (int s = 0; s < span; ++s) {
            total += std::abs(src.positions[(i0 + s + 1) % nb_count] - src.positions[(i0 + s) % nb_count]);
            acc.push_back(total);
        }
        for (int s = 0; s < span; ++s)
            out.positions[(i0 + s) % nb_count] = target[k] + (target[(k + 1) % n] - target[k]) * (acc[s] / total);
    }

    const int ni = src.interior_count();
    if (ni == 0) return out;
    const auto nb = neighbours(src);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ni, ni);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(ni, 2);
    for (int r = 0; r < ni; ++r) {
        const int v = nb_count + r;
        if (nb[v].empty()) throw Error("affine-qc", "tutte_embed", "interior vertex " + std::to_string(v) + " is isolated");
        A(r, r) = static_cast<double>(nb[v].size());
        for (int u : nb[v]) {
            if (u >= nb_count) A(r, u - nb_count) -= 1.0;
            else {
                b(r, 0) += out.positions[u].real();
                b(r, 1) += out.positions[u].imag();
            }
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() < ni) throw Error("affine-qc", "tutte_embed", "singular barycentric system (disconnected interior)");
    Eigen::MatrixXd x = lu.solve(b);
    for (int it = 0; it < 8; ++it) {
        const Eigen::MatrixXd r = b - A * x;
        if (r.cwiseAbs().maxCoeff() < 1e-14) break;
        x += lu.solve(r);
    }
    for (int r = 0; r < ni; ++r) out.positions[nb_count + r] = {x(r, 0), x(r, 1)};

    const double res = barycentric_residual(out);
    if (!(res < 1e-10))
        throw Error("affine-qc", "tutte_embed", "barycentric residual " + std::to_string(res) + " above 1e-10");
    for (const Triangle& tr : out.triangles)
        if (orient(out.positions[tr[0]], out.positions[tr[1]], out.positions[tr[2]]) <= 0.0)
            throw Error("affine-qc", "tutte_embed", "flipped triangle in the embedding");
    return out;
}

double triangle_dilatation(const std::array<Point, 3>& s, const std::array<Point, 3>& d) {
    const Point e1 = s[1] - s[0], e2 = s[2] - s[0];
    const Point f1 = d[1] - d[0], f2 = d[2] - d[0];
    const double scale_s = std::max(std::norm(e1), std::norm(e2));
    const double scale_d = std::max(std::norm(f1), std::norm(f2));
    if (!(std::abs(cross(e1, e2)) > 1e-14 * scale_s))
        throw Error("affine-qc", "triangle_dilatation", "degenerate source triangle");
    if (!(std::abs(cross(f1, f2)) > 1e-14 * scale_d))
        throw Error("affine-qc", "triangle_dilatation", "degenerate target triangle");
    // f(z) = p z + q conj(z) + c, solved from the two edge vectors.
    const Point delta = e1 * std::conj(e2) - e2 * std::conj(e1);
    const Point p = (f1 * std::conj(e2) - f2 * std::conj(e1)) / delta;
    const Point q = (e1 * f2 - e2 * f1) / delta;
    const double ap = std::abs(p), aq = std::abs(q);
    return (ap + aq) / std::abs(ap - aq);
}

DilatationReport rule_kappa(const SubstitutionRule& rule, TriangulationScheme scheme) {
    DilatationReport rep;
    rep.scheme = scheme;
    rep.kappa = 1.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const TriangulatedPolygon src = triangulate_prototile(rule.prototiles[i], scheme);
        const TriangulatedPolygon dst = tutte_embed(src);
        rep.tutte_residual.push_back(barycentric_residual(dst));
        double worst = 1.0;
        for (std::size_t k = 0; k < src.triangles.size(); ++k) {
            const Triangle& tr = src.triangles[k];
            const double kap = triangle_dilatation({src.positions[tr[0]], src.positions[tr[1]], src.positions[tr[2]]},
                                                   {dst.positions[tr[0]], dst.positions[tr[1]], dst.positions[tr[2]]});
            rep.entries.push_back({static_cast<int>(i), static_cast<int>(k), kap});
            worst = std::max(worst, kap);
        }
        rep.per_prototile.push_back(worst);
        rep.kappa = std::max(rep.kappa, worst);
    }
    return rep;
}

std::string kappa_csv(const DilatationReport& rep, const SubstitutionRule& rule) {
    std::ostringstream os;
    os.precision(6);
    os << "# rule=" << rule.name << " scheme=" << to_string(rep.scheme)
       << " (kappa depends on the triangulation scheme)\n";
    os << "prototile,label,triangle,kappa\n";
    for (const auto& e : rep.entries)
        os << rule.prototiles[e.prototile].id << "," << rule.prototiles[e.prototile].label << "," << e.triangle << ","
           << e.kappa << "\n";
    for (std::size_t i = 0; i < rep.per_prototile.size(); ++i)
        os << rule.prototiles[i].id << "," << rule.prototiles[i].label << ",max," << rep.per_prototile[i] << "\n";
    os << "all,,kappa_T," << rep.kappa << "\n";
    return os.str();
}

} // namespace tilepack
