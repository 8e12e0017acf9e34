#include "fbcsf/geom.hpp"

#include <algorithm>
#include <numeric>

namespace fbcsf {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double L2 = norm_sq(ab);
    if (L2 == 0.0) return dist(p, a);
    double t = std::clamp(dot(p - a, ab) / L2, 0.0, 1.0);
    return dist(p, a + t * ab);
}

namespace {

int orientation_sign(Vec2 a, Vec2 b, Vec2 c) {
    double v = cross(b - a, c - a);
    // Scale-aware zero test for collinearity.
    double scale = std::abs(v) + norm_sq(b - a) + norm_sq(c - a);
    if (std::abs(v) <= 1e-14 * scale) return 0;
    return v > 0.0 ? 1 : -1;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) - 1e-14 <= p.x && p.x <= std::max(a.x, b.x) + 1e-14 &&
           std::min(a.y, b.y) - 1e-14 <= p.y && p.y <= std::max(a.y, b.y) + 1e-14;
}

}  // namespace

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    int o1 = orientation_sign(a, b, c);
    int o2 = orientation_sign(a, b, d);
    int o3 = orientation_sign(c, d, a);
    int o4 = orientation_sign(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

bool polyline_self_intersects(const std::vector<Vec2>& pts) {
    const int n_seg = static_cast<int>(pts.size()) - 1;
    if (n_seg < 3) return false;

    struct SegRef {
        double xmin, xmax;
        int idx;
    };
    std::vector<SegRef> segs(n_seg);
    for (int i = 0; i < n_seg; ++i) {
        segs[i] = {std::min(pts[i].x, pts[i + 1].x), std::max(pts[i].x, pts[i + 1].x), i};
    }
    std::sort(segs.begin(), segs.end(),
              [](const SegRef& a, const SegRef& b) { return a.xmin < b.xmin; });

    std::vector<int> active;  // indices into segs, pruned by xmax
    active.reserve(64);
    for (int k = 0; k < n_seg; ++k) {
        const SegRef& s = segs[k];
        // Drop segments whose x-extent ended before this one begins.
        active.erase(std::remove_if(active.begin(), active.end(),
                                    [&](int j) { return segs[j].xmax < s.xmin; }),
                     active.end());
        for (int j : active) {
            int i1 = s.idx, i2 = segs[j].idx;
            if (std::abs(i1 - i2) <= 1) continue;  // adjacent segments share a vertex
            if (segments_intersect(pts[i1], pts[i1 + 1], pts[i2], pts[i2 + 1])) return true;
        }
        active.push_back(k);
    }
    return false;
}

double polyline_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    double best = kInf;
    for (const Vec2& p : a) {
        for (size_t j = 0; j + 1 < b.size(); ++j) {
            best = std::min(best, point_segment_distance(p, b[j], b[j + 1]));
        }
    }
    for (const Vec2& p : b) {
        for (size_t j = 0; j + 1 < a.size(); ++j) {
            best = std::min(best, point_segment_distance(p, a[j], a[j + 1]));
        }
    }
    return best;
}

namespace {

double directed_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                          int samples_per_edge) {
    double worst = 0.0;
    auto dist_to_b = [&](Vec2 p) {
        double best = kInf;
        for (size_t j = 0; j + 1 < b.size(); ++j) {
            best = std::min(best, point_segment_distance(p, b[j], b[j + 1]));
        }
        return best;
    };
    for (size_t i = 0; i + 1 < a.size(); ++i) {
        for (int k = 0; k <= samples_per_edge; ++k) {
            double t = static_cast<double>(k) / (samples_per_edge + 1);
            worst = std::max(worst, dist_to_b(a[i] + t * (a[i + 1] - a[i])));
        }
    }
    worst = std::max(worst, dist_to_b(a.back()));
    return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                          int samples_per_edge) {
    return std::max(directed_hausdorff(a, b, samples_per_edge),
                    directed_hausdorff(b, a, samples_per_edge));
}

}  // namespace fbcsf
