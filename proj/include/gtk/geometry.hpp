#pragma once

#include <array>

namespace gtk {

/// Normalized image point, origin top-left, y grows downward.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned box in normalized image coordinates.
struct BBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    /// x1 <= x2, y1 <= y2, all coordinates finite and inside [0,1].
    bool valid() const noexcept;
    double width() const noexcept { return x2 - x1; }
    double height() const noexcept { return y2 - y1; }
    double area() const noexcept { return width() * height(); }
    bool contains(const BBox& other) const noexcept;

    std::array<double, 4> as_array() const noexcept { return {x1, y1, x2, y2}; }

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Intersection over union. Zero-area boxes give 1 when identical, 0 otherwise.
double iou2d(const BBox& a, const BBox& b) noexcept;

/// Smallest box containing both inputs.
BBox union_box(const BBox& a, const BBox& b) noexcept;

Point center(const BBox& b) noexcept;

double distance(const Point& a, const Point& b) noexcept;

/// Clamp every coordinate into [0,1].
BBox clamp_unit(const BBox& b) noexcept;

/// Square whose side is the distance between the two box centers, centered at
/// their midpoint, before clamping to the image. Throws Errc::ZeroDistance when
/// the centers coincide.
BBox xsign_square_unclamped(const BBox& a, const BBox& b);

/// xsign_square_unclamped followed by clamp_unit. At image edges the clamped
/// box is no longer exactly square.
BBox xsign_square(const BBox& a, const BBox& b);

/// Scale a box about the image center (0.5, 0.5).
BBox scale_about_center(const BBox& b, double factor) noexcept;

}  // namespace gtk
