#pragma once

#include <filesystem>
#include <optional>

#include "fbcsf/curve.hpp"

namespace fbcsf {

// Plain SVG frame: domain boundary, curve, and an optional rescaled inset in
// the top-right corner.
void write_svg_frame(const std::filesystem::path& path, const ConvexDomain& domain,
                     const DiscreteCurve& curve,
                     const std::vector<Vec2>* rescaled_inset = nullptr);

}  // namespace fbcsf
