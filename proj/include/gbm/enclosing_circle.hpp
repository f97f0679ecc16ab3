#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "gbm/errors.hpp"
#include "gbm/mesh.hpp"

namespace gbm {

struct Circle {
    Point2 center;
    double radius = 0.0;

    bool contains(Point2 p, double rel_eps = 1e-12) const {
        const double dx = p.x - center.x, dy = p.y - center.y;
        const double r2 = radius * radius;
        return dx * dx + dy * dy <= r2 + rel_eps * std::max(r2, 1.0);
    }
};

inline Circle circle_from(Point2 a, Point2 b) {
    const Point2 c{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    return {c, 0.5 * std::hypot(a.x - b.x, a.y - b.y)};
}

/// Circumcircle of three points. Collinear triples fall back to the widest pair.
inline Circle circle_from(Point2 a, Point2 b, Point2 c) {
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    const double scale = std::max({bx * bx + by * by, cx * cx + cy * cy, 1e-300});
    if (std::abs(d) <= 1e-14 * scale) {
        Circle best = circle_from(a, b);
        for (const Circle cand : {circle_from(a, c), circle_from(b, c)})
            if (cand.radius > best.radius) best = cand;
        return best;
    }
    const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    const double ux = (cy * b2 - by * c2) / d;
    const double uy = (bx * c2 - cx * b2) / d;
    return {{a.x + ux, a.y + uy}, std::hypot(ux, uy)};
}

/// Smallest enclosing circle by randomized incremental construction (Welzl, iterative form).
/// The shuffle uses a fixed seed so repeated calls on the same input agree bit for bit.
inline Circle smallest_enclosing_circle(std::span<const Point2> points, std::uint64_t seed = 0x5eedu) {
    if (points.empty()) throw EmptyRegion("smallest enclosing circle of an empty point set");
    std::vector<Point2> pts(points.begin(), points.end());

    std::mt19937_64 rng(seed);
    for (std::size_t i = pts.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(pts[i - 1], pts[j]);
    }

    Circle c{pts[0], 0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (c.contains(pts[i])) continue;
        c = {pts[i], 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            if (c.contains(pts[j])) continue;
            c = circle_from(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (c.contains(pts[k])) continue;
                c = circle_from(pts[i], pts[j], pts[k]);
            }
        }
    }
    return c;
}

} // namespace gbm
