#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "duality/imaging.hpp"

namespace duality {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Point {
    double x;
    double y;
};

struct Segment {
    Point a;
    Point b;
};

// Angles in image coordinates (y down), swept from `from` to `to` > from.
struct Arc {
    Point center;
    double radius;
    double from;
    double to;
};

using Stroke = std::variant<Segment, Arc>;

double distance(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

double distance_to(Point p, const Segment& s) {
    const double dx = s.b.x - s.a.x;
    const double dy = s.b.y - s.a.y;
    const double len2 = dx * dx + dy * dy;
    const double t = len2 > 0.0
                         ? std::clamp(((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2, 0.0, 1.0)
                         : 0.0;
    return distance(p, {s.a.x + t * dx, s.a.y + t * dy});
}

double distance_to(Point p, const Arc& arc) {
    double theta = std::atan2(p.y - arc.center.y, p.x - arc.center.x);
    while (theta < arc.from) theta += 2.0 * std::numbers::pi;
    while (theta >= arc.from + 2.0 * std::numbers::pi) theta -= 2.0 * std::numbers::pi;
    if (theta <= arc.to) return std::abs(distance(p, arc.center) - arc.radius);
    auto at = [&](double a) {
        return Point{arc.center.x + arc.radius * std::cos(a), arc.center.y + arc.radius * std::sin(a)};
    };
    return std::min(distance(p, at(arc.from)), distance(p, at(arc.to)));
}

// Skeletons in a unit square; strokes have half-width kHalfWidth.
constexpr double kHalfWidth = 0.09;

std::vector<Stroke> glyph_skeleton(char glyph) {
    switch (glyph) {
    case 'S':
        // Upper bowl opens to the lower right, lower bowl to the upper left;
        // both meet at the centre of the square.
        return {Arc{{0.5, 0.325}, 0.175, 90.0 * kDeg, 340.0 * kDeg},
                Arc{{0.5, 0.675}, 0.175, -90.0 * kDeg, 160.0 * kDeg}};
    case 'O':
        return {Arc{{0.5, 0.5}, 0.32, 0.0, 2.0 * std::numbers::pi}};
    case 'I':
        return {Segment{{0.5, 0.15}, {0.5, 0.85}}, Segment{{0.35, 0.15}, {0.65, 0.15}},
                Segment{{0.35, 0.85}, {0.65, 0.85}}};
    default:
        throw std::invalid_argument(std::string("synth_letter_object: unsupported glyph '") +
                                    glyph + "' (expected S, O or I)");
    }
}

} // namespace

TransmittanceMap synth_letter_object(int width, int height, char glyph, double edge_softness) {
    if (width < 16 || height < 16) {
        throw std::invalid_argument("synth_letter_object: dimensions must be >= 16");
    }
    if (!(edge_softness > 0.0)) {
        throw std::invalid_argument("synth_letter_object: edge_softness must be > 0");
    }
    const std::vector<Stroke> skeleton = glyph_skeleton(glyph);

    // Square frame centred in the image, distances measured in pixels.
    const double side = std::min(width, height);
    const double x0 = 0.5 * (width - side);
    const double y0 = 0.5 * (height - side);
    const double half_width = kHalfWidth * side;

    TransmittanceMap map(width, height, 0.0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const Point p{(x + 0.5 - x0) / side, (y + 0.5 - y0) / side};
            double d = std::numeric_limits<double>::infinity();
            for (const auto& stroke : skeleton) {
                d = std::min(d, std::visit([&](const auto& s) { return distance_to(p, s); }, stroke));
            }
            // Depth inside the stroke, in pixels; zero on the boundary.
            const double depth = half_width - d * side;
            if (depth > 0.0) map.set(x, y, std::min(1.0, depth / edge_softness));
        }
    }
    return map;
}

} // namespace duality
