#include "tilepack/render.hpp"

#include "tilepack/errors.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace tilepack {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x == 0.0 ? 0.0 : x);
    return buf;
}

struct Frame {
    Box box;
    double scale = 1.0;
    double ox = 0.0, oy = 0.0;  // pixel offset of the panel
    double pad = 10.0;
    Point map(Point z) const {
        return {ox + pad + (z.real() - box.lo.real()) * scale, oy + pad + (box.hi.imag() - z.imag()) * scale};
    }
    double height() const { return 2 * pad + (box.hi.imag() - box.lo.imag()) * scale; }
    double width() const { return 2 * pad + (box.hi.real() - box.lo.real()) * scale; }
};

Frame frame_for(const std::vector<Point>& pts, double width, double ox) {
    Frame f;
    f.ox = ox;
    f.box = bounding_box(pts);
    const double w = std::max(f.box.hi.real() - f.box.lo.real(), f.box.hi.imag() - f.box.lo.imag());
    f.scale = w > 0 ? (width - 2 * f.pad) / w : 1.0;
    return f;
}

std::string path(const Frame& f, const std::vector<Point>& poly) {
    std::string d;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point p = f.map(poly[i]);
        d += (i ? " L " : "M ") + num(p.real()) + " " + num(p.imag());
    }
    return d + " Z";
}

struct Scene {
    std::vector<std::vector<Point>> tiles;
    std::vector<char> lit;
    std::vector<std::pair<Point, double>> circles;
};

std::string draw(const Scene& s, const RenderStyle& style) {
    std::vector<Point> all;
    for (const auto& t : s.tiles) all.insert(all.end(), t.begin(), t.end());
    for (const auto& [c, r] : s.circles) {
        all.push_back(c + Point{r, r});
        all.push_back(c - Point{r, r});
    }
    const Frame main = frame_for(all, style.width, 0.0);
    double total_w = all.empty() ? style.width : main.width();
    double total_h = all.empty() ? style.width : main.height();

    std::ostringstream body;
    body << "<g id=\"tiles\" stroke=\"" << style.stroke << "\" stroke-width=\"0.5\" stroke-linejoin=\"round\">\n";
    for (std::size_t i = 0; i < s.tiles.size(); ++i)
        body << "<path class=\"" << (s.lit[i] ? "tile hl" : "tile") << "\" fill=\""
             << (s.lit[i] ? style.highlight : style.fill) << "\" d=\"" << path(main, s.tiles[i]) << "\"/>\n";
    body << "</g>\n";
    if (!s.circles.empty()) {
        body << "<g id=\"circles\" fill=\"none\" stroke=\"#a03030\" stroke-width=\"0.3\">\n";
        for (const auto& [c, r] : s.circles) {
            const Point p = main.map(c);
            body << "<circle cx=\"" << num(p.real()) << "\" cy=\"" << num(p.imag()) << "\" r=\"" << num(r * main.scale)
                 << "\"/>\n";
        }
        body << "</g>\n";
    }
    if (style.panel) {
        const auto& [euclid, conformal] = *style.panel;
        std::vector<Point> pts = euclid.points;
        pts.insert(pts.end(), conformal.points.begin(), conformal.points.end());
        const Frame side = frame_for(pts, style.width / 2, total_w);
        body << "<g id=\"panel\" fill=\"none\" stroke-width=\"1\">\n";
        body << "<path class=\"euclidean\" stroke=\"" << style.stroke << "\" d=\"" << path(side, euclid.points) << "\"/>\n";
        body << "<path class=\"conformal\" stroke=\"" << style.highlight << "\" d=\"" << path(side, conformal.points)
             << "\"/>\n";
        body << "</g>\n";
        total_w += side.width();
        total_h = std::max(total_h, side.height());
    }
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(total_w) << "\" height=\"" << num(total_h)
       << "\" viewBox=\"0 0 " << num(total_w) << " " << num(total_h) << "\">\n";
    os << body.str() << "</svg>\n";
    return os.str();
}

std::vector<char> lit_tiles(const TileComplex& cx, int highlight) {
    std::vector<char> lit(cx.tiles.size(), 0);
    if (highlight < 0) return lit;
    if (highlight >= static_cast<int>(cx.patch.lineage.size()))
        throw Error("cli-io", "render_svg", "highlight lineage id " + std::to_string(highlight) + " out of range");
    for (std::size_t t = 0; t < cx.tiles.size(); ++t) lit[t] = cx.patch.descends_from(cx.tiles[t].node, highlight);
    return lit;
}

} // namespace

std::string render_svg(const TileComplex& cx, int highlight, const RenderStyle& style) {
    Scene s;
    for (std::size_t t = 0; t < cx.tiles.size(); ++t) s.tiles.push_back(cx.tile_polygon(static_cast<int>(t)));
    s.lit = lit_tiles(cx, highlight);
    return draw(s, style);
}

std::string render_svg(const TileComplex& cx, const PackingComplex& pc, const Packing& p, int highlight,
                       const RenderStyle& style) {
    if (!p.laid_out) throw Error("cli-io", "render_svg", "packing has not been laid out");
    Scene s;
    for (std::size_t t = 0; t < cx.tiles.size(); ++t) {
        std::vector<Point> poly;
        for (int v : pc.tile_boundary(cx, static_cast<int>(t))) poly.push_back(p.centers[v]);
        s.tiles.push_back(std::move(poly));
    }
    s.lit = lit_tiles(cx, highlight);
    if (style.circles)
        for (std::size_t v = 0; v < pc.vertex_count(); ++v) s.circles.emplace_back(p.centers[v], p.euclidean_radii[v]);
    return draw(s, style);
}

} // namespace tilepack
