#pragma once

#include <cmath>

namespace sbrp {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Euclidean distance in miles.
inline double walk_distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace sbrp
