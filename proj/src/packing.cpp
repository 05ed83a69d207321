#include "tilepack/packing.hpp"

#include "tilepack/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tilepack {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sinh(a) / sinh(x + a), stable for large or infinite a.
double hyp_ratio(double x, double a) {
    if (std::isinf(a)) return std::exp(-x);
    return std::exp(-x) * std::expm1(-2.0 * a) / std::expm1(-2.0 * (x + a));
}

double coth(double y) { return std::isinf(y) ? 1.0 : 1.0 / std::tanh(y); }

// sin^2 of the half angle at x.
double half_angle_g(Geometry g, double x, double a, double b) {
    if (g == Geometry::euclidean) return (a / (x + a)) * (b / (x + b));
    return hyp_ratio(x, a) * hyp_ratio(x, b);
}

struct Flower {
    const std::vector<int>& nb;
    bool closed;
    std::size_t count() const { return closed ? nb.size() : nb.size() - 1; }
    int a(std::size_t i) const { return nb[i]; }
    int b(std::size_t i) const { return nb[(i + 1) % nb.size()]; }
};

Flower flower(const PackingComplex& pc, int v) { return {pc.flowers[v], !pc.boundary[v]}; }

} // namespace

std::string to_string(Geometry g) { return g == Geometry::euclidean ? "euclidean" : "hyperbolic"; }
std::string to_string(PackingMode m) { return m == PackingMode::disc_maximal ? "disc" : "euclid"; }
std::string to_string(SolverKind s) {
    switch (s) {
    case SolverKind::hybrid: return "hybrid";
    case SolverKind::newton: return "newton";
    case SolverKind::uniform_neighbor: return "uniform_neighbor";
    }
    return "?";
}

std::string to_string(BoundaryRadii b) { return b == BoundaryRadii::uniform ? "uniform" : "reference"; }

BoundaryRadii parse_boundary_radii(const std::string& s) {
    if (s == "uniform") return BoundaryRadii::uniform;
    if (s == "reference") return BoundaryRadii::reference;
    throw Error("circle-packing", "parse_boundary_radii", "unknown boundary radii policy '" + s + "' (expected uniform or reference)");
}

PackingMode parse_mode(const std::string& s) {
    if (s == "disc" || s == "disc_maximal") return PackingMode::disc_maximal;
    if (s == "euclid" || s == "euclidean" || s == "euclidean_boundary") return PackingMode::euclidean_boundary;
    throw Error("circle-packing", "parse_mode", "unknown packing mode '" + s + "' (expected disc or euclid)");
}

SolverKind parse_solver(const std::string& s) {
    if (s == "hybrid") return SolverKind::hybrid;
    if (s == "newton") return SolverKind::newton;
    if (s == "uniform_neighbor" || s == "unm" || s == "sweep") return SolverKind::uniform_neighbor;
    throw Error("circle-packing", "parse_solver", "unknown solver '" + s + "'");
}

double triple_angle(Geometry g, double x, double a, double b) {
    const double s = std::clamp(half_angle_g(g, x, a, b), 0.0, 1.0);
    return 2.0 * std::asin(std::sqrt(s));
}

double angle_sum(Geometry g, const PackingComplex& pc, const std::vector<double>& r, int v) {
    const Flower f = flower(pc, v);
    double s = 0.0;
    for (std::size_t i = 0; i < f.count(); ++i) s += triple_angle(g, r[v], r[f.a(i)], r[f.b(i)]);
    return s;
}

namespace {

class Solver {
public:
    Solver(const PackingComplex& pc, const SolveOptions& opts)
        : pc_(pc), opts_(opts),
          geom_(opts.mode == PackingMode::disc_maximal ? Geometry::hyperbolic : Geometry::euclidean) {
        const std::size_t nv = pc.vertex_count();
        index_.assign(nv, -1);
        for (std::size_t v = 0; v < nv; ++v)
            if (!pc.boundary[v]) {
                index_[v] = static_cast<int>(interior_.size());
                interior_.push_back(static_cast<int>(v));
            }
        r_.assign(nv, 1.0);
        init_radii();
    }

    Packing run() {
        Packing out;
        out.geometry = geom_;
        out.mode = opts_.mode;
        double res = residual();
        history_.push_back(res);
        long long iters = 0;
        if (interior_.empty()) return finish(out, res, iters);

        const bool sweeps_first = opts_.solver != SolverKind::newton;
        if (sweeps_first) {
            // Uniform-neighbour sweeps; in hybrid mode they only warm up Newton.
            const double handoff = opts_.solver == SolverKind::hybrid ? 0.05 : opts_.tol;
            const long long cap = opts_.solver == SolverKind::hybrid ? 200 : opts_.max_iters;
            while (res >= handoff && iters < cap && iters < opts_.max_iters) {
                sweep();
                res = residual();
                history_.push_back(res);
                ++iters;
            }
            if (opts_.solver == SolverKind::uniform_neighbor) {
                if (res >= opts_.tol) fail(iters, res);
                return finish(out, res, iters);
            }
        }
        int polish = 0;
        double prev = res, best = res;
        int since_best = 0;
        while (iters < opts_.max_iters) {
            if (res < opts_.tol) {
                // A few extra quadratic steps keep layout drift far below tol.
                if (polish >= 3 || res < 1e-13 || res > 0.5 * prev) break;
                ++polish;
            }
            prev = res;
            if (!newton_step()) {
                // No ascent along the Newton direction: sweep before retrying.
                for (int k = 0; k < 20 && iters < opts_.max_iters; ++k, ++iters) sweep();
            }
            res = residual();
            history_.push_back(res);
            ++iters;
            if (res < best) {
                best = res;
                since_best = 0;
            } else if (++since_best > 50) {
                fail(iters, res);
            }
        }
        if (res >= opts_.tol) fail(iters, res);
        return finish(out, res, iters);
    }

private:
    const PackingComplex& pc_;
    const SolveOptions& opts_;
    Geometry geom_;
    std::vector<int> index_;
    std::vector<int> interior_;
    std::vector<double> r_;
    std::vector<double> history_;
    bool analyzed_ = false;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;

    void init_radii() {
        const std::size_t nv = pc_.vertex_count();
        if (!opts_.initial_radii.empty() && opts_.initial_radii.size() != nv)
            throw Error("circle-packing", "solve_radii", "initial radii size mismatch");
        if (geom_ == Geometry::hyperbolic) {
            for (std::size_t v = 0; v < nv; ++v) r_[v] = pc_.boundary[v] ? kInfiniteRadius : 1.0;
        } else {
            const int m = 1 << pc_.hex_depth;
            // Boundary segments of the affine complex have length 1/m.
            const double rb = 0.5 / m;
            if (!opts_.boundary_radii.empty() && opts_.boundary_radii.size() != nv)
                throw Error("circle-packing", "solve_radii", "boundary radii must have one entry per vertex");
            for (std::size_t v = 0; v < nv; ++v) {
                r_[v] = rb;
                if (pc_.boundary[v] && !opts_.boundary_radii.empty()) {
                    r_[v] = opts_.boundary_radii[v];
                    if (!(r_[v] > 0.0) || !std::isfinite(r_[v]))
                        throw Error("circle-packing", "solve_radii", "boundary radii must be positive and finite");
                }
            }
        }
        if (!opts_.initial_radii.empty())
            for (int v : interior_)
                if (opts_.initial_radii[v] > 0.0 && std::isfinite(opts_.initial_radii[v])) r_[v] = opts_.initial_radii[v];
    }

    double residual() const {
        double worst = 0.0;
        for (int v : interior_) worst = std::max(worst, std::abs(angle_sum(geom_, pc_, r_, v) - kTwoPi));
        return worst;
    }

    double update(int v) const {
        const Flower f = flower(pc_, v);
        const double k = static_cast<double>(f.count());
        const double theta = angle_sum(geom_, pc_, r_, v);
        const double beta = std::sin(theta / (2.0 * k));
        const double delta = std::sin(std::numbers::pi / k);
        const double r = r_[v];
        if (geom_ == Geometry::euclidean) {
            const double rhat = r * beta / (1.0 - beta);
            return rhat * (1.0 - delta) / delta;
        }
        // Equal neighbours of radius rho reproduce theta: tanh rho = beta sinh r / (1 - beta cosh r).
        const double denom = 1.0 - beta * std::cosh(r);
        const double t = denom > 0.0 ? beta * std::sinh(r) / denom : 2.0;
        if (t >= 1.0) return -std::log(delta);
        const double rho = std::atanh(t);
        if (rho > 300.0) return -std::log(delta);
        return std::asinh(std::sinh(rho) / delta) - rho;
    }

    void sweep() {
        for (int v : interior_) {
            const double nr = update(v);
            if (nr > 0.0 && std::isfinite(nr)) r_[v] = nr;
        }
    }

    double to_u(double r) const { return geom_ == Geometry::euclidean ? std::log(r) : std::log(std::tanh(0.5 * r)); }
    double from_u(double u) const { return geom_ == Geometry::euclidean ? std::exp(u) : 2.0 * std::atanh(std::exp(u)); }

    // Assembles F and -J (in u variables) over interior vertices.
    void assemble(Eigen::VectorXd& F, Eigen::SparseMatrix<double>& A) const {
        const int n = static_cast<int>(interior_.size());
        F.setZero(n);
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(n * 8);
        for (int row = 0; row < n; ++row) {
            const int v = interior_[row];
            const Flower f = flower(pc_, v);
            const double x = r_[v];
            double diag = 0.0, sum = 0.0;
            for (std::size_t i = 0; i < f.count(); ++i) {
                const int a = f.a(i), b = f.b(i);
                const double ra = r_[a], rb = r_[b];
                const double g = std::clamp(half_angle_g(geom_, x, ra, rb), 1e-300, 1.0 - 1e-16);
                sum += 2.0 * std::asin(std::sqrt(g));
                const double th = std::sqrt(g / (1.0 - g));  // tan(theta/2)
                double dv, da, db;
                if (geom_ == Geometry::euclidean) {
                    dv = -th * x * (1.0 / (x + ra) + 1.0 / (x + rb));
                    da = th * x / (x + ra);
                    db = th * x / (x + rb);
                } else {
                    dv = -th * std::sinh(x) * (coth(x + ra) + coth(x + rb));
                    da = th * hyp_ratio(ra, x);
                    db = th * hyp_ratio(rb, x);
                }
                diag += dv;
                if (index_[a] >= 0) trip.emplace_back(row, index_[a], -da);
                if (index_[b] >= 0) trip.emplace_back(row, index_[b], -db);
            }
            trip.emplace_back(row, row, -diag);
            F(row) = sum - kTwoPi;
        }
        A.resize(n, n);
        A.setFromTriplets(trip.begin(), trip.end());
    }

    Eigen::VectorXd angle_errors() const {
        Eigen::VectorXd F(interior_.size());
        for (std::size_t i = 0; i < interior_.size(); ++i) F(i) = angle_sum(geom_, pc_, r_, interior_[i]) - kTwoPi;
        return F;
    }

    // Sets interior radii to u0 + t * step; false if some radius leaves its domain.
    bool move_to(const std::vector<double>& u0, const Eigen::VectorXd& step, double t) {
        for (std::size_t i = 0; i < interior_.size(); ++i) {
            const double u = u0[i] + t * step(i);
            if (geom_ == Geometry::hyperbolic && u >= -1e-15) return false;
            const double r = from_u(u);
            if (!(r > 0.0) || !std::isfinite(r)) return false;
            r_[interior_[i]] = r;
        }
        return true;
    }

    // The angle errors are the gradient of a strictly concave potential in u,
    // so along the Newton direction h'(t) = step . F(u0 + t step) decreases.
    // The full step is taken when |h'(1)| is small against h'(0); otherwise a
    // safeguarded secant search stops where h' is still >= 0.
    bool newton_step() {
        Eigen::VectorXd F;
        Eigen::SparseMatrix<double> A;
        assemble(F, A);
        Eigen::VectorXd step;
        if (!analyzed_) {
            ldlt_.analyzePattern(A);
            analyzed_ = true;
        }
        ldlt_.factorize(A);
        if (ldlt_.info() == Eigen::Success) {
            step = ldlt_.solve(F);
        } else {
            Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
            lu.compute(A);
            if (lu.info() != Eigen::Success) return false;
            step = lu.solve(F);
        }
        if (!step.allFinite()) return false;
        const double g0 = step.dot(F);
        if (!(g0 > 0.0)) return false;
        const std::size_t n = interior_.size();
        std::vector<double> u0(n);
        for (std::size_t i = 0; i < n; ++i) u0[i] = to_u(r_[interior_[i]]);

        auto slope = [&](double t, double& g) {
            if (!move_to(u0, step, t)) return false;
            g = step.dot(angle_errors());
            return std::isfinite(g);
        };
        double g = 0.0;
        if (slope(1.0, g) && g >= -0.1 * g0) return true;
        double lo = 0.0, glo = g0, hi = 1.0, ghi = std::isfinite(g) ? g : -kInfiniteRadius;
        for (int k = 0; k < 60; ++k) {
            double t = 0.5 * (lo + hi);
            if (std::isfinite(ghi)) {
                const double sec = lo + (hi - lo) * glo / (glo - ghi);
                if (sec > lo + 1e-3 * (hi - lo) && sec < hi - 1e-3 * (hi - lo)) t = sec;
            }
            if (slope(t, g) && g >= 0.0) {
                lo = t;
                glo = g;
                if (g <= 0.1 * g0) break;
            } else {
                hi = t;
                ghi = std::isfinite(g) ? g : -kInfiniteRadius;
            }
        }
        if (lo > 0.0 && move_to(u0, step, lo)) return true;
        move_to(u0, step, 0.0);
        return false;
    }

    [[noreturn]] void fail(long long iters, double res) const {
        std::ostringstream os;
        os << "no convergence after " << iters << " iterations: residual " << res << " >= tol " << opts_.tol;
        throw ConvergenceError("solve_radii", os.str(), history_);
    }

    Packing finish(Packing& out, double res, long long iters) const {
        out.radii = r_;
        out.residual = res;
        out.iterations = iters;
        out.history = history_;
        return out;
    }
};

} // namespace

Packing solve_radii(const PackingComplex& pc, const SolveOptions& opts) {
    if (!(opts.tol > 0.0)) throw Error("circle-packing", "solve_radii", "tol must be > 0");
    if (pc.vertex_count() == 0) throw Error("circle-packing", "solve_radii", "empty packing complex");
    Solver s(pc, opts);
    return s.run();
}

std::vector<double> reference_boundary_radii(const PackingComplex& pc) {
    std::vector<double> r(pc.vertex_count(), 0.0);
    const auto& cyc = pc.boundary_cycle;
    const std::size_t n = cyc.size();
    for (std::size_t i = 0; i < n; ++i) {
        const int u = cyc[i], w = cyc[(i + 1) % n];
        const double len = std::abs(pc.reference_positions[w] - pc.reference_positions[u]);
        r[u] += 0.25 * len;
        r[w] += 0.25 * len;
    }
    return r;
}

PackingDiagnostics packing_error(const PackingComplex& pc, const Packing& p) {
    PackingDiagnostics d;
    std::size_t count = 0;
    for (std::size_t v = 0; v < pc.vertex_count(); ++v) {
        if (pc.boundary[v]) continue;
        const double e = std::abs(angle_sum(p.geometry, pc, p.radii, static_cast<int>(v)) - kTwoPi);
        d.max_residual = std::max(d.max_residual, e);
        d.mean_residual += e;
        ++count;
    }
    if (count) d.mean_residual /= static_cast<double>(count);
    if (!p.laid_out) return d;
    double sum = 0.0;
    for (double r : p.euclidean_radii) sum += r;
    d.mean_radius = p.euclidean_radii.empty() ? 0.0 : sum / static_cast<double>(p.euclidean_radii.size());
    for (const Triangle& t : pc.triangles)
        for (int k = 0; k < 3; ++k) {
            const int u = t[k], v = t[(k + 1) % 3];
            const double gap = std::abs(p.centers[u] - p.centers[v]);
            d.max_tangency = std::max(d.max_tangency, std::abs(gap - (p.euclidean_radii[u] + p.euclidean_radii[v])));
        }
    return d;
}

std::string packing_to_json(const PackingComplex& pc, const Packing& p, const Provenance& prov) {
    using nlohmann::json;
    json doc;
    doc["geometry"] = to_string(p.geometry);
    doc["mode"] = to_string(p.mode);
    doc["residual"] = p.residual;
    doc["iterations"] = p.iterations;
    doc["provenance"] = {{"rule", prov.rule},
                         {"depth", prov.depth},
                         {"buffer", prov.buffer},
                         {"hex_depth", prov.hex_depth},
                         {"mode", to_string(p.mode)}};
    if (!prov.extra.empty()) doc["provenance"]["config"] = prov.extra;
    json verts = json::array();
    for (std::size_t v = 0; v < pc.vertex_count(); ++v) {
        json j;
        j["id"] = v;
        j["tag"] = to_string(pc.tags[v]);
        j["boundary"] = static_cast<bool>(pc.boundary[v]);
        if (std::isfinite(p.radii[v])) j["radius"] = p.radii[v];
        else j["radius"] = nullptr;
        if (p.laid_out) {
            j["x"] = p.centers[v].real();
            j["y"] = p.centers[v].imag();
            j["euclidean_radius"] = p.euclidean_radii[v];
        }
        verts.push_back(j);
    }
    doc["vertices"] = verts;
    return doc.dump(1) + "\n";
}

Packing packing_from_json(const PackingComplex& pc, const std::string& document) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw Error("circle-packing", "packing_from_json", e.what());
    }
    Packing p;
    try {
        p.geometry = doc.at("geometry").get<std::string>() == "euclidean" ? Geometry::euclidean : Geometry::hyperbolic;
        p.mode = parse_mode(doc.at("mode").get<std::string>());
        p.residual = doc.value("residual", 0.0);
        const json& verts = doc.at("vertices");
        if (verts.size() != pc.vertex_count())
            throw Error("circle-packing", "packing_from_json",
                        "vertex count " + std::to_string(verts.size()) + " does not match the complex (" +
                            std::to_string(pc.vertex_count()) + ")");
        p.radii.resize(verts.size());
        bool centers = true;
        for (std::size_t v = 0; v < verts.size(); ++v) {
            const json& j = verts[v];
            p.radii[v] = j.at("radius").is_null() ? kInfiniteRadius : j.at("radius").get<double>();
            centers = centers && j.contains("x");
        }
        if (centers) {
            for (const json& j : verts) {
                p.centers.emplace_back(j.at("x").get<double>(), j.at("y").get<double>());
                p.euclidean_radii.push_back(j.at("euclidean_radius").get<double>());
            }
            p.laid_out = true;
        }
    } catch (const json::exception& e) {
        throw Error("circle-packing", "packing_from_json", e.what());
    }
    return p;
}

} // namespace tilepack
