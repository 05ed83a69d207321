#include "tilepack/complex.hpp"

#include "tilepack/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace tilepack {

namespace {

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

std::uint64_t cell_key(long long i, long long j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) | static_cast<std::uint32_t>(j);
}

std::string fmt_point(Point z) {
    std::ostringstream os;
    os.precision(6);
    os << "(" << z.real() << ", " << z.imag() << ")";
    return os.str();
}

} // namespace

int TileComplex::edge_index(int a, int b) const {
    const std::uint64_t k = edge_key(a, b);
    auto it = std::lower_bound(edge_lookup.begin(), edge_lookup.end(), std::make_pair(k, -1));
    return (it != edge_lookup.end() && it->first == k) ? it->second : -1;
}

Polygon TileComplex::tile_polygon(int t) const {
    Polygon p;
    for (int v : tiles[t].corners) p.push_back(positions[v]);
    return p;
}

std::vector<int> TileComplex::boundary_cycle() const {
    std::map<int, int> next;
    for (const ComplexTile& t : tiles) {
        const std::size_t k = t.corners.size();
        for (std::size_t i = 0; i < k; ++i) {
            const int a = t.corners[i], b = t.corners[(i + 1) % k];
            if (edges[edge_index(a, b)].tiles.size() != 1) continue;
            if (!next.emplace(a, b).second)
                throw Error("complex-builder", "boundary_cycle", "boundary is pinched at vertex " + std::to_string(a));
        }
    }
    std::vector<int> cycle;
    if (next.empty()) return cycle;
    const int start = next.begin()->first;
    int v = start;
    do {
        cycle.push_back(v);
        auto it = next.find(v);
        if (it == next.end()) throw Error("complex-builder", "boundary_cycle", "boundary is not closed");
        v = it->second;
    } while (v != start && cycle.size() <= next.size());
    if (cycle.size() != next.size())
        throw Error("complex-builder", "boundary_cycle", "boundary has more than one component");
    return cycle;
}

TileComplex weld(const Patch& patch, const SubstitutionRule& rule, const WeldOptions& opts) {
    TileComplex cx;
    cx.patch = patch;
    std::vector<Polygon> corners;
    corners.reserve(patch.tiles.size());
    std::vector<Point> all;
    for (const PlacedTile& t : patch.tiles) {
        corners.push_back(tile_corners(rule, t));
        all.insert(all.end(), corners.back().begin(), corners.back().end());
    }
    double eps = opts.eps;
    if (eps <= 0.0) eps = 1e-6 * std::max(diameter(all), 1e-300);
    cx.eps = eps;

    std::unordered_map<std::uint64_t, std::vector<int>> grid;
    auto cell = [&](Point p) {
        return std::make_pair(static_cast<long long>(std::floor(p.real() / eps)),
                              static_cast<long long>(std::floor(p.imag() / eps)));
    };
    auto find_or_add = [&](Point p) {
        const auto [ci, cj] = cell(p);
        int best = -1;
        for (long long di = -1; di <= 1; ++di)
            for (long long dj = -1; dj <= 1; ++dj) {
                auto it = grid.find(cell_key(ci + di, cj + dj));
                if (it == grid.end()) continue;
                for (int v : it->second)
                    if (std::abs(cx.positions[v] - p) <= eps && (best < 0 || v < best)) best = v;
            }
        if (best >= 0) return best;
        const int id = static_cast<int>(cx.positions.size());
        cx.positions.push_back(p);
        grid[cell_key(ci, cj)].push_back(id);
        return id;
    };

    cx.tiles.reserve(patch.tiles.size());
    for (std::size_t i = 0; i < patch.tiles.size(); ++i) {
        ComplexTile t;
        t.type = patch.tiles[i].type;
        t.node = patch.tiles[i].node;
        for (const Point& p : corners[i]) t.corners.push_back(find_or_add(p));
        std::vector<int> sorted = t.corners;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw Error("complex-builder", "weld",
                        "degenerate tile " + std::to_string(i) + ": two corners within eps " + std::to_string(eps));
        cx.tiles.push_back(std::move(t));
    }

    std::unordered_map<std::uint64_t, int> index;
    for (std::size_t i = 0; i < cx.tiles.size(); ++i) {
        const auto& c = cx.tiles[i].corners;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const int a = c[k], b = c[(k + 1) % c.size()];
            auto [it, fresh] = index.emplace(edge_key(a, b), static_cast<int>(cx.edges.size()));
            if (fresh) cx.edges.push_back({std::min(a, b), std::max(a, b), {}});
            cx.edges[it->second].tiles.push_back(static_cast<int>(i));
        }
    }
    cx.edge_lookup.assign(index.begin(), index.end());
    std::sort(cx.edge_lookup.begin(), cx.edge_lookup.end());

    if (opts.strict) {
        const IntersectionReport r = check_intersection_condition(cx);
        if (!r.passed())
            throw Error("complex-builder", "weld",
                        "intersection condition violated (" + std::to_string(r.violations.size()) +
                            " violations), first: " + r.violations.front().describe());
    }
    return cx;
}

std::string IntersectionViolation::describe() const {
    std::string s = kind + " between tiles " + std::to_string(tile_a);
    if (tile_b >= 0) s += " and " + std::to_string(tile_b);
    return s + " at " + fmt_point(where);
}

IntersectionReport check_intersection_condition(const TileComplex& cx) {
    IntersectionReport report;
    const int nt = static_cast<int>(cx.tiles.size());
    if (nt == 0) return report;

    // Combinatorial checks on edges.
    for (const ComplexEdge& e : cx.edges) {
        const Point mid = 0.5 * (cx.positions[e.a] + cx.positions[e.b]);
        if (e.tiles.size() > 2) {
            report.violations.push_back({"non-manifold-edge", e.tiles[0], e.tiles[1], mid});
            continue;
        }
        if (e.tiles.size() == 2) {
            auto forward = [&](int t) {
                const auto& c = cx.tiles[t].corners;
                for (std::size_t k = 0; k < c.size(); ++k)
                    if (c[k] == e.a && c[(k + 1) % c.size()] == e.b) return true;
                return false;
            };
            if (forward(e.tiles[0]) == forward(e.tiles[1]))
                report.violations.push_back({"folded-edge", e.tiles[0], e.tiles[1], mid});
        }
    }

    // Geometric checks on candidate pairs from a bounding-box grid.
    std::vector<Polygon> polys(nt);
    std::vector<Box> boxes(nt);
    std::vector<double> areas(nt);
    double mean_size = 0.0;
    for (int i = 0; i < nt; ++i) {
        polys[i] = cx.tile_polygon(i);
        boxes[i] = bounding_box(polys[i]);
        areas[i] = area(polys[i]);
        mean_size += std::max(boxes[i].hi.real() - boxes[i].lo.real(), boxes[i].hi.imag() - boxes[i].lo.imag());
    }
    const double h = std::max(mean_size / nt, 1e-300);
    const double eps = cx.eps;
    std::unordered_map<std::uint64_t, std::vector<int>> grid;
    for (int i = 0; i < nt; ++i) {
        const long long x0 = static_cast<long long>(std::floor((boxes[i].lo.real() - eps) / h));
        const long long x1 = static_cast<long long>(std::floor((boxes[i].hi.real() + eps) / h));
        const long long y0 = static_cast<long long>(std::floor((boxes[i].lo.imag() - eps) / h));
        const long long y1 = static_cast<long long>(std::floor((boxes[i].hi.imag() + eps) / h));
        for (long long x = x0; x <= x1; ++x)
            for (long long y = y0; y <= y1; ++y) grid[cell_key(x, y)].push_back(i);
    }
    std::set<std::pair<int, int>> pairs;
    for (const auto& [key, list] : grid)
        for (std::size_t a = 0; a < list.size(); ++a)
            for (std::size_t b = a + 1; b < list.size(); ++b) {
                const int i = std::min(list[a], list[b]), j = std::max(list[a], list[b]);
                if (i != j && boxes[i].overlaps(boxes[j], eps)) pairs.emplace(i, j);
            }

    for (const auto& [i, j] : pairs) {
        bool flagged = false;
        for (int pass = 0; pass < 2 && !flagged; ++pass) {
            const int a = pass ? j : i, b = pass ? i : j;
            const auto& ca = cx.tiles[a].corners;
            const auto& cb = cx.tiles[b].corners;
            for (std::size_t k = 0; k < ca.size() && !flagged; ++k) {
                const Point p = cx.positions[ca[k]], q = cx.positions[ca[(k + 1) % ca.size()]];
                for (int v : cb) {
                    if (v == ca[k] || v == ca[(k + 1) % ca.size()]) continue;
                    if (on_open_segment(cx.positions[v], p, q, eps)) {
                        report.violations.push_back({"t-junction", a, b, cx.positions[v]});
                        flagged = true;
                        break;
                    }
                }
            }
        }
        if (flagged) continue;
        const auto& ci = cx.tiles[i].corners;
        const auto& cj = cx.tiles[j].corners;
        for (std::size_t k = 0; k < ci.size() && !flagged; ++k)
            for (std::size_t l = 0; l < cj.size() && !flagged; ++l) {
                const Point p = cx.positions[ci[k]], q = cx.positions[ci[(k + 1) % ci.size()]];
                const Point r = cx.positions[cj[l]], s = cx.positions[cj[(l + 1) % cj.size()]];
                if (segments_cross(p, q, r, s, eps)) {
                    report.violations.push_back({"crossing", i, j, 0.5 * (p + q)});
                    flagged = true;
                }
            }
        if (flagged) continue;
        const double ov = intersection_area(polys[i], polys[j]);
        if (ov > 1e-9 * std::min(areas[i], areas[j]))
            report.violations.push_back({"overlap", i, j, centroid(polys[i])});
    }
    return report;
}

BufferedPatch buffered_patch(const SubstitutionRule& rule, int host, const RootSelector& sel, int n) {
    if (host < 0 || host >= static_cast<int>(rule.size()))
        throw Error("complex-builder", "buffered_patch", "host prototile index " + std::to_string(host) + " out of range");
    if (sel.buffer < 0 || n < 0) throw Error("complex-builder", "buffered_patch", "buffer and n must be >= 0");
    BufferedPatch out;
    out.host = host;
    out.buffer = sel.buffer;
    out.n = n;
    Patch base = subdivide_patch(Patch::single(rule, host), rule, sel.buffer);
    const Polygon hostpoly = rule.prototiles[host].vertices;
    auto margin = [&](const PlacedTile& t) {
        const Polygon p = tile_polygon(rule, t);
        double d = std::numeric_limits<double>::infinity();
        for (const Point& z : p) d = std::min(d, point_polyline_distance(z, hostpoly));
        for (const Point& z : hostpoly) d = std::min(d, point_polyline_distance(z, p));
        return d;
    };
    int pick = 0;
    if (sel.child >= 0) {
        if (sel.child >= static_cast<int>(base.tiles.size()))
            throw Error("complex-builder", "buffered_patch",
                        "root selector " + std::to_string(sel.child) + " out of range (" +
                            std::to_string(base.tiles.size()) + " tiles at level " + std::to_string(sel.buffer) + ")");
        pick = sel.child;
    } else {
        double best = -1.0;
        for (std::size_t i = 0; i < base.tiles.size(); ++i) {
            const double m = margin(base.tiles[i]);
            if (m > best * (1.0 + 1e-9) + 1e-15) {
                best = m;
                pick = static_cast<int>(i);
            }
        }
    }
    out.root = base.tiles[pick].node;
    out.margin = sel.buffer == 0 ? 0.0 : margin(base.tiles[pick]);
    out.patch = subdivide_patch(base, rule, n);
    return out;
}

Polygon AggregateBoundary::polygon(const TileComplex& cx) const {
    Polygon p;
    for (int v : path) p.push_back(cx.positions[v]);
    return p;
}

AggregateBoundary aggregate_boundary(const TileComplex& cx, int root, const SubstitutionRule& rule) {
    if (root < 0 || root >= static_cast<int>(cx.patch.lineage.size()))
        throw Error("complex-builder", "aggregate_boundary", "root lineage id " + std::to_string(root) + " out of range");
    AggregateBoundary ab;
    ab.ancestor = root;
    std::vector<char> inside(cx.tiles.size(), 0);
    for (std::size_t t = 0; t < cx.tiles.size(); ++t)
        if (cx.patch.descends_from(cx.tiles[t].node, root)) {
            inside[t] = 1;
            ab.tiles.push_back(static_cast<int>(t));
        }
    if (ab.tiles.empty())
        throw Error("complex-builder", "aggregate_boundary", "root " + std::to_string(root) + " has no current descendants");

    std::unordered_map<int, int> next;
    for (int t : ab.tiles) {
        const auto& c = cx.tiles[t].corners;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const int a = c[k], b = c[(k + 1) % c.size()];
            const ComplexEdge& e = cx.edges[cx.edge_index(a, b)];
            int in = 0;
            for (int u : e.tiles) in += inside[u];
            if (in == 2) continue;
            if (!next.emplace(a, b).second)
                throw Error("complex-builder", "aggregate_boundary", "descendants are not simply connected (pinch)");
        }
    }
    const LineageNode& node = cx.patch.lineage[root];
    const Polygon corners = placed_corners(rule, node.type, node.map);
    auto locate = [&](Point p) {
        int best = -1;
        double bd = cx.eps;
        for (const auto& [v, w] : next) {
            const double d = std::abs(cx.positions[v] - p);
            if (d <= bd) {
                bd = d;
                best = v;
            }
        }
        return best;
    };
    const int start = locate(corners[0]);
    if (start < 0)
        throw Error("complex-builder", "aggregate_boundary", "ancestor corner " + fmt_point(corners[0]) + " not on the boundary");
    int v = start;
    do {
        ab.path.push_back(v);
        auto it = next.find(v);
        if (it == next.end()) throw Error("complex-builder", "aggregate_boundary", "boundary is not closed");
        v = it->second;
    } while (v != start && ab.path.size() <= next.size());
    if (ab.path.size() != next.size())
        throw Error("complex-builder", "aggregate_boundary", "descendants are not simply connected");

    std::unordered_map<int, int> pos;
    for (std::size_t i = 0; i < ab.path.size(); ++i) pos[ab.path[i]] = static_cast<int>(i);
    for (const Point& c : corners) {
        const int w = locate(c);
        if (w < 0) throw Error("complex-builder", "aggregate_boundary", "ancestor corner " + fmt_point(c) + " not welded");
        ab.corner_marks.push_back(pos.at(w));
    }
    const auto base = rule.prototiles[node.type].base_corner_indices();
    if (base[0] < 0 || base[1] < 0) throw Error("complex-builder", "aggregate_boundary", "base corners not declared");
    ab.base_a = ab.corner_marks[base[0]];
    ab.base_b = ab.corner_marks[base[1]];
    return ab;
}

std::string complex_to_json(const TileComplex& cx, const SubstitutionRule& rule) {
    using nlohmann::json;
    json doc;
    doc["rule"] = rule.name;
    doc["level"] = cx.patch.level;
    doc["eps"] = cx.eps;
    json verts = json::array();
    for (std::size_t i = 0; i < cx.positions.size(); ++i)
        verts.push_back({{"id", i}, {"x", cx.positions[i].real()}, {"y", cx.positions[i].imag()}});
    doc["vertices"] = verts;
    json tiles = json::array();
    for (std::size_t i = 0; i < cx.tiles.size(); ++i) {
        const ComplexTile& t = cx.tiles[i];
        tiles.push_back({{"id", i},
                         {"prototile", rule.prototiles[t.type].id},
                         {"vertices", t.corners},
                         {"lineage", cx.patch.lineage_path(t.node)}});
    }
    doc["tiles"] = tiles;
    json edges = json::array();
    for (const ComplexEdge& e : cx.edges) edges.push_back({{"a", e.a}, {"b", e.b}, {"tiles", e.tiles}});
    doc["edges"] = edges;
    return doc.dump(1) + "\n";
}

} // namespace tilepack
