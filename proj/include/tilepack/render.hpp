#pragma once

#include "tilepack/complex.hpp"
#include "tilepack/packing.hpp"
#include "tilepack/shape.hpp"

#include <optional>
#include <string>
#include <utility>

namespace tilepack {

struct RenderStyle {
    double width = 800.0;  // pixels of the main panel
    bool circles = false;  // draw packing circles too
    std::string fill = "#f4f1e8";
    std::string highlight = "#5b8bd0";
    std::string stroke = "#202020";
    // Optional side panel: Euclidean tile vs normalized conformal aggregate.
    std::optional<std::pair<Shape, Shape>> panel;
};

// Tiles as closed paths through their reference corners. `highlight` is a
// lineage node; its descendants are filled with the highlight colour (-1: none).
std::string render_svg(const TileComplex& complex, int highlight, const RenderStyle& style = {});

// Tiles as closed paths through the circle centers of their boundary chains.
std::string render_svg(const TileComplex& complex, const PackingComplex& pc, const Packing& packing, int highlight,
                       const RenderStyle& style = {});

} // namespace tilepack
