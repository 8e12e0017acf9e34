#include "fbcsf/svg.hpp"

#include <cstdio>
#include <fstream>

namespace fbcsf {

namespace {

void path_from_points(std::ofstream& out, const std::vector<Vec2>& pts, const char* style) {
    out << "<path d=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%c%.6g %.6g ", i == 0 ? 'M' : 'L', pts[i].x, -pts[i].y);
        out << buf;
    }
    out << "\" " << style << "/>\n";
}

}  // namespace

void write_svg_frame(const std::filesystem::path& path, const ConvexDomain& domain,
                     const DiscreteCurve& curve, const std::vector<Vec2>* rescaled_inset) {
    const std::vector<Vec2>& v = curve.vertices();
    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    auto grow = [&](Vec2 p) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    };
    for (const Vec2& p : v) grow(p);

    std::vector<Vec2> boundary;
    if (domain.bounded()) {
        const int m = 256;
        for (int i = 0; i <= m; ++i) {
            boundary.push_back(domain.frame(domain.boundary_length() * i / m).point);
        }
        for (const Vec2& p : boundary) grow(p);
    } else {
        double pad = std::max(xmax - xmin, 1.0);
        boundary = {{xmin - pad, 0.0}, {xmax + pad, 0.0}};
        grow(boundary[0]);
        grow(boundary[1]);
    }
    double w = xmax - xmin, h = ymax - ymin;
    double pad = 0.05 * std::max(w, h) + 1e-9;

    std::ofstream out(path);
    char header[256];
    std::snprintf(header, sizeof(header),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6g %.6g %.6g %.6g\">\n",
                  xmin - pad, -(ymax + pad), w + 2 * pad, h + 2 * pad);
    out << header;
    char sw[96];
    std::snprintf(sw, sizeof(sw), "%.6g", 0.004 * std::max(w, h));
    std::string curve_style =
        std::string("fill=\"none\" stroke=\"#c0392b\" stroke-width=\"") + sw + "\"";
    std::string boundary_style =
        std::string("fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"") + sw + "\"";
    path_from_points(out, boundary, boundary_style.c_str());
    path_from_points(out, v, curve_style.c_str());
    if (rescaled_inset && rescaled_inset->size() >= 2) {
        // Unit-scale inset drawn at 20% size in the top-right corner.
        double scale = 0.2 * std::max(w, h);
        Vec2 corner{xmax - 1.2 * scale, ymax - 0.2 * scale};
        std::vector<Vec2> inset;
        inset.reserve(rescaled_inset->size());
        for (const Vec2& p : *rescaled_inset) inset.push_back(corner + 0.5 * scale * p);
        std::string inset_style =
            std::string("fill=\"none\" stroke=\"#27ae60\" stroke-width=\"") + sw + "\"";
        path_from_points(out, inset, inset_style.c_str());
    }
    out << "</svg>\n";
}

}  // namespace fbcsf
