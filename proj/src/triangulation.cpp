#include "tilepack/errors.hpp"
#include "tilepack/packing.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace tilepack {

std::string to_string(VertexTag t) {
    switch (t) {
    case VertexTag::tile_corner: return "tile_corner";
    case VertexTag::edge_point: return "edge_point";
    case VertexTag::tile_center: return "tile_center";
    case VertexTag::refinement: return "refinement";
    }
    return "?";
}

std::size_t PackingComplex::interior_count() const {
    return static_cast<std::size_t>(std::count(boundary.begin(), boundary.end(), 0));
}

std::vector<int> PackingComplex::edge_chain(const TileComplex& cx, int a, int b) const {
    const int e = cx.edge_index(a, b);
    if (e < 0) throw Error("circle-packing", "edge_chain", "no edge between vertices " + std::to_string(a) + " and " + std::to_string(b));
    std::vector<int> chain = edge_chains[e];
    if (cx.edges[e].a != a) std::reverse(chain.begin(), chain.end());
    return chain;
}

std::vector<int> PackingComplex::expand_cycle(const TileComplex& cx, const std::vector<int>& cycle) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const std::vector<int> c = edge_chain(cx, cycle[i], cycle[(i + 1) % cycle.size()]);
        out.insert(out.end(), c.begin(), c.end() - 1);
    }
    return out;
}

std::vector<int> PackingComplex::tile_boundary(const TileComplex& cx, int t) const {
    return expand_cycle(cx, cx.tiles[t].corners);
}

PackingComplex build_triangulation(const TileComplex& cx, int hex_depth) {
    if (hex_depth < 0 || hex_depth > 8)
        throw Error("circle-packing", "build_triangulation", "hex_depth must be in [0, 8]");
    PackingComplex pc;
    pc.hex_depth = hex_depth;
    const int m = 1 << hex_depth;
    auto add = [&](VertexTag tag, Point ref) {
        pc.tags.push_back(tag);
        pc.reference_positions.push_back(ref);
        return static_cast<int>(pc.tags.size()) - 1;
    };
    for (const Point& p : cx.positions) add(VertexTag::tile_corner, p);

    pc.edge_chains.resize(cx.edges.size());
    for (std::size_t e = 0; e < cx.edges.size(); ++e) {
        const int a = cx.edges[e].a, b = cx.edges[e].b;
        const Point pa = cx.positions[a], pb = cx.positions[b];
        auto& chain = pc.edge_chains[e];
        chain.push_back(a);
        for (int k = 1; k < m; ++k) chain.push_back(add(VertexTag::edge_point, pa + (pb - pa) * (double(k) / m)));
        chain.push_back(b);
    }

    for (std::size_t t = 0; t < cx.tiles.size(); ++t) {
        const auto& corners = cx.tiles[t].corners;
        const int n = static_cast<int>(corners.size());
        Polygon poly;
        for (int v : corners) poly.push_back(cx.positions[v]);
        const Point c = centroid(poly);
        const int center = add(VertexTag::tile_center, c);
        pc.tile_center.push_back(center);
        std::vector<std::vector<int>> spokes(n);
        for (int i = 0; i < n; ++i) {
            spokes[i].push_back(center);
            for (int s = 1; s < m; ++s) spokes[i].push_back(add(VertexTag::refinement, c + (poly[i] - c) * (double(s) / m)));
            spokes[i].push_back(corners[i]);
        }
        for (int i = 0; i < n; ++i) {
            const int j = (i + 1) % n;
            const std::vector<int> rim = pc.edge_chain(cx, corners[i], corners[j]);
            const Point A = poly[i] - c, B = poly[j] - c;
            std::map<std::pair<int, int>, int> inner;
            auto id = [&](int s, int u) {
                if (s + u == m) return rim[u];
                if (u == 0) return spokes[i][s];
                if (s == 0) return spokes[j][u];
                auto [it, fresh] = inner.emplace(std::make_pair(s, u), -1);
                if (fresh) it->second = add(VertexTag::refinement, c + A * (double(s) / m) + B * (double(u) / m));
                return it->second;
            };
            for (int s = 0; s < m; ++s)
                for (int u = 0; s + u < m; ++u) {
                    pc.triangles.push_back({id(s, u), id(s + 1, u), id(s, u + 1)});
                    if (s + u + 2 <= m) pc.triangles.push_back({id(s + 1, u), id(s + 1, u + 1), id(s, u + 1)});
                }
        }
    }

    // Flowers: in a CCW triangle (v, a, b), a precedes b around v.
    const std::size_t nv = pc.tags.size();
    std::vector<std::vector<std::array<int, 3>>> around(nv);  // (a, b, triangle)
    for (std::size_t k = 0; k < pc.triangles.size(); ++k) {
        const Triangle& tr = pc.triangles[k];
        for (int r = 0; r < 3; ++r) around[tr[r]].push_back({tr[(r + 1) % 3], tr[(r + 2) % 3], static_cast<int>(k)});
    }
    pc.flowers.resize(nv);
    pc.petals.resize(nv);
    pc.boundary.assign(nv, 0);
    for (std::size_t v = 0; v < nv; ++v) {
        auto& list = around[v];
        if (list.empty()) throw Error("circle-packing", "build_triangulation", "isolated vertex " + std::to_string(v));
        std::unordered_map<int, int> by_first;
        std::unordered_map<int, int> has_pred;
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (!by_first.emplace(list[i][0], static_cast<int>(i)).second)
                throw Error("circle-packing", "build_triangulation", "non-manifold flower at vertex " + std::to_string(v));
            has_pred[list[i][1]] = 1;
        }
        int start = 0;
        bool open = false;
        for (std::size_t i = 0; i < list.size(); ++i)
            if (!has_pred.count(list[i][0])) {
                start = static_cast<int>(i);
                open = true;
                break;
            }
        auto& fl = pc.flowers[v];
        auto& pe = pc.petals[v];
        int cur = start;
        for (std::size_t step = 0; step < list.size(); ++step) {
            fl.push_back(list[cur][0]);
            pe.push_back(list[cur][2]);
            auto it = by_first.find(list[cur][1]);
            if (it == by_first.end()) {
                if (!open || step + 1 != list.size())
                    throw Error("circle-packing", "build_triangulation", "broken flower at vertex " + std::to_string(v));
                break;
            }
            cur = it->second;
        }
        if (open) {
            fl.push_back(list[cur][1]);
            pc.boundary[v] = 1;
        } else if (cur != start) {
            throw Error("circle-packing", "build_triangulation", "flower does not close at vertex " + std::to_string(v));
        }
    }
    pc.boundary_cycle = pc.expand_cycle(cx, cx.boundary_cycle());
    return pc;
}

} // namespace tilepack
