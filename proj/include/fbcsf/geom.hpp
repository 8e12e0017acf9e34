#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace fbcsf {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline constexpr double norm_sq(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Counterclockwise rotation by pi/2.
inline constexpr Vec2 rot90(Vec2 v) { return {-v.y, v.x}; }

inline Vec2 normalized(Vec2 v) {
    double n = norm(v);
    return n > 0.0 ? v / n : Vec2{0.0, 0.0};
}

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

// Distance from point p to segment [a, b].
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

// True if segments [a,b] and [c,d] intersect (including touching).
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

// True if some pair of non-adjacent segments of the open polyline intersects.
// Sort-and-prune sweep over x-extents; near O(N log N) for curve-like input.
bool polyline_self_intersects(const std::vector<Vec2>& pts);

// Minimal distance between two polylines (point-to-segment based).
double polyline_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

// Directed Hausdorff-type distance helpers. `samples_per_edge` extra
// subdivisions refine the directed max beyond the vertices.
double hausdorff_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b,
                          int samples_per_edge = 4);

}  // namespace fbcsf
