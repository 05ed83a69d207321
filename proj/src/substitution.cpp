#include "tilepack/substitution.hpp"

#include "tilepack/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tilepack {

std::array<int, 2> Prototile::base_corner_indices(double eps) const {
    std::array<int, 2> out{-1, -1};
    for (int k = 0; k < 2; ++k) {
        const int v = base_edge[k];
        if (v < 0 || v >= static_cast<int>(vertices.size())) continue;
        for (int i = 0; i < side_count(); ++i)
            if (std::abs(corners[i] - vertices[v]) <= eps) out[k] = i;
    }
    return out;
}

int SubstitutionRule::type_of_id(int id) const {
    for (std::size_t i = 0; i < prototiles.size(); ++i)
        if (prototiles[i].id == id) return static_cast<int>(i);
    return -1;
}

int SubstitutionRule::type_of_label(std::string_view label) const {
    for (std::size_t i = 0; i < prototiles.size(); ++i)
        if (prototiles[i].label == label) return static_cast<int>(i);
    return -1;
}

Patch Patch::single(const SubstitutionRule& rule, int type, const SimilarityMap& map) {
    if (type < 0 || type >= static_cast<int>(rule.size()))
        throw Error("substitution-rules", "single", "unknown prototile index " + std::to_string(type));
    Patch p;
    LineageNode root;
    root.type = type;
    root.map = map;
    p.lineage.push_back(root);
    p.tiles.push_back({type, map, 0});
    return p;
}

std::vector<int> Patch::lineage_path(int node) const {
    std::vector<int> path;
    while (node >= 0 && lineage[node].parent >= 0) {
        path.push_back(lineage[node].child_index);
        node = lineage[node].parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

bool Patch::descends_from(int node, int ancestor) const {
    while (node >= 0) {
        if (node == ancestor) return true;
        if (lineage[node].level <= lineage[ancestor].level) return false;
        node = lineage[node].parent;
    }
    return false;
}

int Patch::ancestor_at_level(int node, int lvl) const {
    while (node >= 0 && lineage[node].level > lvl) node = lineage[node].parent;
    return (node >= 0 && lineage[node].level == lvl) ? node : -1;
}

std::vector<int> Patch::nodes_at_level(int lvl) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < lineage.size(); ++i)
        if (lineage[i].level == lvl) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> Patch::descendant_tiles(int node) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < tiles.size(); ++i)
        if (descends_from(tiles[i].node, node)) out.push_back(static_cast<int>(i));
    return out;
}

Polygon placed_polygon(const SubstitutionRule& rule, int type, const SimilarityMap& map) {
    Polygon out;
    for (const Point& z : rule.prototiles.at(type).vertices) out.push_back(map(z));
    return out;
}

Polygon placed_corners(const SubstitutionRule& rule, int type, const SimilarityMap& map) {
    Polygon out;
    for (const Point& z : rule.prototiles.at(type).corners) out.push_back(map(z));
    return out;
}

Patch subdivide_patch(const Patch& patch, const SubstitutionRule& rule) {
    Patch out;
    out.level = patch.level + 1;
    out.lineage = patch.lineage;
    std::size_t total = 0;
    for (const PlacedTile& t : patch.tiles) {
        if (t.type < 0 || t.type >= static_cast<int>(rule.size()))
            throw Error("substitution-rules", "subdivide_patch",
                        "unknown prototile index " + std::to_string(t.type));
        total += rule.children[t.type].size();
    }
    out.tiles.reserve(total);
    out.lineage.reserve(patch.lineage.size() + total);
    for (const PlacedTile& t : patch.tiles) {
        const auto& kids = rule.children[t.type];
        for (std::size_t c = 0; c < kids.size(); ++c) {
            LineageNode node;
            node.parent = t.node;
            node.child_index = static_cast<int>(c);
            node.level = out.level;
            node.type = kids[c].type;
            node.map = compose(t.map, kids[c].map);
            const int id = static_cast<int>(out.lineage.size());
            out.lineage.push_back(node);
            if (t.node >= 0) out.lineage[t.node].children.push_back(id);
            out.tiles.push_back({node.type, node.map, id});
        }
    }
    return out;
}

Patch subdivide_patch(const Patch& patch, const SubstitutionRule& rule, int times) {
    Patch p = patch;
    for (int i = 0; i < times; ++i) p = subdivide_patch(p, rule);
    return p;
}

// ---------------------------------------------------------------------------
// validation

namespace {

std::string fmt_point(Point z) {
    std::ostringstream os;
    os.precision(6);
    os << "(" << z.real() << ", " << z.imag() << ")";
    return os.str();
}

std::string fmt_path(const std::vector<int>& path) {
    std::string s = "[";
    for (std::size_t i = 0; i < path.size(); ++i) s += (i ? "," : "") + std::to_string(path[i]);
    return s + "]";
}

void check_prototile(const Prototile& p, double tol, std::vector<std::string>& out) {
    const double scale = std::max(1.0, diameter(p.vertices));
    const double eps = tol * scale;
    if (p.vertices.size() < 3) {
        out.push_back("fewer than 3 vertices");
        return;
    }
    if (!is_simple(p.vertices, eps)) out.push_back("vertices do not form a simple polygon");
    if (signed_area(p.vertices) <= 0) out.push_back("vertices are not positively oriented");
    if (p.side_count() < 3) out.push_back("fewer than 3 combinatorial corners");
    // Vertices must appear among the corners in the same cyclic order; extra
    // corners must sit on edge interiors.
    int last = -1, wraps = 0;
    for (std::size_t v = 0; v < p.vertices.size(); ++v) {
        int at = -1;
        for (int i = 0; i < p.side_count(); ++i)
            if (std::abs(p.corners[i] - p.vertices[v]) <= eps) at = i;
        if (at < 0) {
            out.push_back("vertex " + std::to_string(v) + " is not a combinatorial corner");
            continue;
        }
        if (at < last) ++wraps;
        last = at;
    }
    if (wraps > 1) out.push_back("combinatorial corners are not in the vertices' cyclic order");
    for (int i = 0; i < p.side_count(); ++i) {
        bool vertex = false;
        for (const Point& v : p.vertices) vertex = vertex || std::abs(v - p.corners[i]) <= eps;
        if (vertex) continue;
        bool on_edge = false;
        for (std::size_t e = 0; e < p.vertices.size(); ++e)
            on_edge = on_edge || on_open_segment(p.corners[i], p.vertices[e], p.vertices[(e + 1) % p.vertices.size()], eps);
        if (!on_edge) out.push_back("corner " + fmt_point(p.corners[i]) + " is not on an edge interior");
    }
    const auto b = p.base_corner_indices(eps);
    if (b[0] < 0 || b[1] < 0) out.push_back("base edge endpoints are not combinatorial corners");
}

// Every tile edge (between consecutive corners) must be free of other tiles'
// corners; every host corner must be a corner of some tile.
void check_corner_consistency(const SubstitutionRule& rule, int host, int depth, double tol,
                              std::vector<std::string>& out) {
    Patch patch = subdivide_patch(Patch::single(rule, host), rule, depth);
    const double eps = tol * std::max(1.0, diameter(rule.prototiles[host].vertices));
    std::vector<Polygon> corners;
    for (const PlacedTile& t : patch.tiles) corners.push_back(tile_corners(rule, t));
    std::vector<Point> all;
    for (const Polygon& c : corners) all.insert(all.end(), c.begin(), c.end());
    for (std::size_t i = 0; i < corners.size(); ++i) {
        const Polygon& c = corners[i];
        const Box box = bounding_box(c);
        for (std::size_t e = 0; e < c.size(); ++e) {
            const Point a = c[e], b = c[(e + 1) % c.size()];
            for (const Point& q : all) {
                if (q.real() < box.lo.real() - eps || q.real() > box.hi.real() + eps ||
                    q.imag() < box.lo.imag() - eps || q.imag() > box.hi.imag() + eps)
                    continue;
                if (on_open_segment(q, a, b, eps)) {
                    out.push_back("depth " + std::to_string(depth) + ": tile " +
                                  fmt_path(patch.lineage_path(patch.tiles[i].node)) + " (" +
                                  rule.prototiles[patch.tiles[i].type].label + ") has subdivision vertex " +
                                  fmt_point(q) + " inside side " + std::to_string(e) +
                                  "; declare it a combinatorial corner");
                    break;
                }
            }
        }
    }
    for (const Point& hc : rule.prototiles[host].corners) {
        bool found = false;
        for (const Point& q : all) found = found || std::abs(q - hc) <= eps;
        if (!found)
            out.push_back("depth " + std::to_string(depth) + ": host corner " + fmt_point(hc) +
                          " is not a corner of any subtile");
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

} // namespace

bool PrototileReport::passed(double tol) const {
    return area_residual <= tol && containment.empty() && overlap.empty() && similarity.empty() &&
           corners.empty() && prototile.empty();
}

bool ValidationReport::passed() const {
    return std::all_of(prototiles.begin(), prototiles.end(),
                       [&](const PrototileReport& r) { return r.passed(tol); });
}

std::string ValidationReport::summary(const SubstitutionRule& rule) const {
    std::ostringstream os;
    os.precision(3);
    os << "rule " << rule.name << ": " << (passed() ? "PASS" : "FAIL") << " (tol " << tol << ")\n";
    for (const PrototileReport& r : prototiles) {
        const Prototile& p = rule.prototiles[r.type];
        os << "  " << p.label << " (id " << p.id << ", " << p.side_count() << " corners, "
           << rule.children[r.type].size() << " children): area residual " << std::scientific
           << r.area_residual << std::defaultfloat << (r.passed(tol) ? "  ok" : "  FAIL") << "\n";
        auto list = [&](const char* what, const std::vector<std::string>& v) {
            for (const auto& s : v) os << "    " << what << ": " << s << "\n";
        };
        list("prototile", r.prototile);
        list("containment", r.containment);
        list("overlap", r.overlap);
        list("similarity", r.similarity);
        list("corners", r.corners);
    }
    return os.str();
}

ValidationReport validate_rule(const SubstitutionRule& rule, double tol) {
    ValidationReport report;
    report.tol = tol;
    for (std::size_t h = 0; h < rule.size(); ++h) {
        PrototileReport r;
        r.type = static_cast<int>(h);
        const Prototile& parent = rule.prototiles[h];
        check_prototile(parent, tol, r.prototile);
        const double parent_area = parent.area();
        const auto& kids = rule.children[h];
        std::vector<Polygon> polys;
        double sum = 0.0;
        for (std::size_t c = 0; c < kids.size(); ++c) {
            const ChildPlacement& k = kids[c];
            const std::string who = "child " + std::to_string(c);
            if (k.type < 0 || k.type >= static_cast<int>(rule.size())) {
                r.similarity.push_back(who + " has unknown prototile");
                polys.emplace_back();
                continue;
            }
            const double s = k.map.scale();
            if (!std::isfinite(s) || s <= tol) r.similarity.push_back(who + " has a degenerate factor");
            else if (s >= 1.0) r.similarity.push_back(who + " is not a contraction (|factor| >= 1)");
            polys.push_back(placed_polygon(rule, k.type, k.map));
            sum += area(polys.back());
        }
        r.area_residual = std::abs(sum - parent_area);
        if (!r.prototile.empty()) {
            report.prototiles.push_back(std::move(r));
            continue;
        }
        for (std::size_t c = 0; c < polys.size(); ++c) {
            if (polys[c].empty()) continue;
            const double outside = area(polys[c]) - intersection_area(polys[c], parent.vertices);
            if (outside > tol * parent_area) {
                std::ostringstream os;
                os << "child " << c << " extends outside the parent by area " << outside;
                r.containment.push_back(os.str());
            }
        }
        for (std::size_t a = 0; a < polys.size(); ++a)
            for (std::size_t b = a + 1; b < polys.size(); ++b) {
                if (polys[a].empty() || polys[b].empty()) continue;
                const double ov = intersection_area(polys[a], polys[b]);
                if (ov > tol * parent_area) {
                    std::ostringstream os;
                    os << "children " << a << " and " << b << " overlap by area " << ov;
                    r.overlap.push_back(os.str());
                }
            }
        if (r.similarity.empty() && r.containment.empty() && r.overlap.empty()) {
            // Corner bookkeeping only makes sense for a geometrically sound rule.
            bool protos_ok = true;
            for (const Prototile& p : rule.prototiles) {
                std::vector<std::string> v;
                check_prototile(p, tol, v);
                protos_ok = protos_ok && v.empty();
            }
            if (protos_ok)
                for (int d = 1; d <= 2; ++d) check_corner_consistency(rule, r.type, d, tol, r.corners);
        }
        report.prototiles.push_back(std::move(r));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Standing Assumption

IncidenceMatrix incidence_matrix(const SubstitutionRule& rule) {
    const std::size_t q = rule.size();
    IncidenceMatrix m;
    m.entries.assign(q, std::vector<long long>(q, 0));
    for (std::size_t i = 0; i < q; ++i)
        for (const ChildPlacement& c : rule.children[i]) m.entries[i][c.type] += 1;
    if (q == 0) return m;
    // Track only the positivity pattern to avoid overflow.
    std::vector<std::vector<char>> base(q, std::vector<char>(q)), pow = base;
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) pow[i][j] = base[i][j] = m.entries[i][j] > 0;
    const std::size_t limit = q * q;
    for (std::size_t n = 1; n <= limit; ++n) {
        bool all = true;
        for (std::size_t i = 0; i < q && all; ++i)
            for (std::size_t j = 0; j < q && all; ++j) all = pow[i][j] != 0;
        if (all) {
            m.primitive = true;
            m.exponent = static_cast<int>(n);
            break;
        }
        std::vector<std::vector<char>> next(q, std::vector<char>(q, 0));
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t k = 0; k < q; ++k)
                if (pow[i][k])
                    for (std::size_t j = 0; j < q; ++j) next[i][j] = next[i][j] || base[k][j];
        pow.swap(next);
    }
    return m;
}

long long tile_count(const SubstitutionRule& rule, int type, int n) {
    const IncidenceMatrix m = incidence_matrix(rule);
    std::vector<long long> v(rule.size(), 0);
    v.at(type) = 1;
    for (int s = 0; s < n; ++s) {
        std::vector<long long> w(rule.size(), 0);
        for (std::size_t i = 0; i < rule.size(); ++i)
            for (std::size_t j = 0; j < rule.size(); ++j) w[j] += v[i] * m.entries[i][j];
        v.swap(w);
    }
    long long total = 0;
    for (long long x : v) total += x;
    return total;
}

std::optional<ConfigurationC> find_special_configuration(const SubstitutionRule& rule, int max_depth) {
    const double tol = 1e-7;
    for (int depth = 1; depth <= max_depth; ++depth) {
        std::vector<Patch> patches;
        for (std::size_t h = 0; h < rule.size(); ++h)
            patches.push_back(subdivide_patch(Patch::single(rule, static_cast<int>(h)), rule, depth));
        // Ordered by (depth, pair type, host, lineage).
        for (std::size_t type = 0; type < rule.size(); ++type) {
            for (std::size_t h = 0; h < rule.size(); ++h) {
                const Patch& p = patches[h];
                std::vector<int> same;
                for (std::size_t i = 0; i < p.tiles.size(); ++i)
                    if (p.tiles[i].type == static_cast<int>(type)) same.push_back(static_cast<int>(i));
                for (std::size_t a = 0; a < same.size(); ++a)
                    for (std::size_t b = a + 1; b < same.size(); ++b) {
                        const PlacedTile& tp = p.tiles[same[a]];
                        const PlacedTile& tq = p.tiles[same[b]];
                        // S = q o p^-1, matching base edges.
                        const SimilarityMap s = compose(tq.map, tp.map.inverse());
                        if (!s.is_congruence(tol) || s.linear_part_is_pm_identity(tol)) continue;
                        ConfigurationC c;
                        c.host = static_cast<int>(h);
                        c.depth = depth;
                        c.type = static_cast<int>(type);
                        c.path_p = p.lineage_path(tp.node);
                        c.path_q = p.lineage_path(tq.node);
                        c.relation = s;
                        return c;
                    }
            }
        }
    }
    return std::nullopt;
}

AssumptionReport check_standing_assumption(const SubstitutionRule& rule, int max_depth) {
    AssumptionReport r;
    r.incidence = incidence_matrix(rule);
    r.max_depth = max_depth;
    r.configuration = find_special_configuration(rule, max_depth);
    return r;
}

double in_situ_defect(const SubstitutionRule& rule, int type, int n) {
    const Polygon host = rule.prototiles.at(type).vertices;
    const Patch patch = subdivide_patch(Patch::single(rule, type), rule, n);
    std::vector<Polygon> polys;
    std::vector<Box> boxes;
    for (const PlacedTile& t : patch.tiles) {
        polys.push_back(tile_polygon(rule, t));
        boxes.push_back(bounding_box(polys.back()));
    }
    double tiles_area = 0.0, inside = 0.0, overlap = 0.0;
    for (std::size_t i = 0; i < polys.size(); ++i) {
        tiles_area += area(polys[i]);
        inside += intersection_area(polys[i], host);
    }
    const double pad = -1e-12;
    for (std::size_t i = 0; i < polys.size(); ++i)
        for (std::size_t j = i + 1; j < polys.size(); ++j)
            if (boxes[i].overlaps(boxes[j], pad)) overlap += intersection_area(polys[i], polys[j]);
    // With disjoint interiors, |host| + |U| - 2|host n U| is the exact
    // symmetric difference; overlaps are added on top.
    return std::abs(area(host) + tiles_area - 2.0 * inside) + overlap;
}

} // namespace tilepack
