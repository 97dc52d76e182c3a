#include "gtk/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "gtk/error.hpp"

namespace gtk {

namespace {
bool in_unit(double v) noexcept { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }
}  // namespace

bool BBox::valid() const noexcept {
    return in_unit(x1) && in_unit(y1) && in_unit(x2) && in_unit(y2) && x1 <= x2 && y1 <= y2;
}

bool BBox::contains(const BBox& o) const noexcept {
    return x1 <= o.x1 && y1 <= o.y1 && x2 >= o.x2 && y2 >= o.y2;
}

double iou2d(const BBox& a, const BBox& b) noexcept {
    const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return a == b ? 1.0 : 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

BBox union_box(const BBox& a, const BBox& b) noexcept {
    return {std::min(a.x1, b.x1), std::min(a.y1, b.y1), std::max(a.x2, b.x2), std::max(a.y2, b.y2)};
}

Point center(const BBox& b) noexcept { return {(b.x1 + b.x2) / 2.0, (b.y1 + b.y2) / 2.0}; }

double distance(const Point& a, const Point& b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

BBox clamp_unit(const BBox& b) noexcept {
    auto c = [](double v) { return std::clamp(v, 0.0, 1.0); };
    return {c(b.x1), c(b.y1), c(b.x2), c(b.y2)};
}

BBox xsign_square_unclamped(const BBox& a, const BBox& b) {
    const Point ca = center(a);
    const Point cb = center(b);
    const double side = distance(ca, cb);
    if (side <= 0.0) throw Error(Errc::ZeroDistance, "box centers coincide");
    const Point mid{(ca.x + cb.x) / 2.0, (ca.y + cb.y) / 2.0};
    const double half = side / 2.0;
    return {mid.x - half, mid.y - half, mid.x + half, mid.y + half};
}

BBox xsign_square(const BBox& a, const BBox& b) { return clamp_unit(xsign_square_unclamped(a, b)); }

BBox scale_about_center(const BBox& b, double factor) noexcept {
    auto s = [factor](double v) { return 0.5 + (v - 0.5) * factor; };
    return {s(b.x1), s(b.y1), s(b.x2), s(b.y2)};
}

}  // namespace gtk
