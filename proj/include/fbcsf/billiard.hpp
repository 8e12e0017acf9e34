#pragma once

#include "fbcsf/domain.hpp"

namespace fbcsf {

// Shortest single-bounce billiard trajectory between two interior points.
// At the minimising bounce the reflection law sin(theta_x) + sin(theta_y) = 0
// holds; theta reports theta_x (so theta_y = -theta).
struct ReflectedDistanceResult {
    double distance = 0.0;  // d~ = d_x + d_y
    BoundaryFrame bounce;   // z
    double theta = 0.0;     // common reflection angle theta_x = -theta_y
    double d_x = 0.0;
    double d_y = 0.0;
    // Set when a second local minimum ties the global one within 1e-9 relative.
    bool multiple_minimizers = false;
};

// First and second variations of the Euclidean distance d(x, y) along unit
// directions X (at x) and Y (at y).
struct DistanceVariations {
    double first_x = 0.0;   // d/dX d  = sin(alpha_x)
    double first_y = 0.0;   // d/dY d  = -sin(alpha_y)
    double second_xx = 0.0; // cos^2(alpha_x)/d
    double second_yy = 0.0; // cos^2(alpha_y)/d
    double second_xy = 0.0; // -cos(alpha_x)cos(alpha_y)/d
};

// Global minimiser of |x - z| + |y - z| over z on the boundary.
// Preconditions: x, y strictly interior (distance to boundary above
// 1e-12 * scale); violations throw std::invalid_argument.
ReflectedDistanceResult reflected_distance(const ConvexDomain& domain, Vec2 x, Vec2 y);

// Throws std::invalid_argument when x == y.
DistanceVariations distance_variations(Vec2 x, Vec2 y, Vec2 X, Vec2 Y);

}  // namespace fbcsf
