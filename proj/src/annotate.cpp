#include "gtk/annotate.hpp"

#include <algorithm>
#include <numeric>

#include "gtk/error.hpp"

namespace gtk {

std::string_view to_string(Arity arity) noexcept {
    switch (arity) {
        case Arity::OneHanded: return "one_handed";
        case Arity::TwoHanded: return "two_handed";
        case Arity::TwoHandedXsign: return "two_handed_xsign";
    }
    return "one_handed";
}

Arity arity_from_string(std::string_view name) {
    if (name == "one_handed") return Arity::OneHanded;
    if (name == "two_handed") return Arity::TwoHanded;
    if (name == "two_handed_xsign") return Arity::TwoHandedXsign;
    throw Error(Errc::InvalidArgument, "unknown arity '" + std::string(name) + "'");
}

ClassRegistry::ClassRegistry(std::vector<GestureClassMeta> classes) : classes_(std::move(classes)) {
    std::set<std::string> seen;
    for (const auto& c : classes_) {
        if (c.label.empty()) throw Error(Errc::InvalidArgument, "empty class label");
        if (!seen.insert(c.label).second)
            throw Error(Errc::InvalidArgument, "duplicate class label '" + c.label + "'");
    }
}

const GestureClassMeta* ClassRegistry::find(std::string_view label) const noexcept {
    auto it = std::find_if(classes_.begin(), classes_.end(),
                           [&](const GestureClassMeta& c) { return c.label == label; });
    return it == classes_.end() ? nullptr : &*it;
}

std::set<std::string> ClassRegistry::mirror_blacklist() const {
    std::set<std::string> out;
    for (const auto& c : classes_)
        if (!c.mirror_safe) out.insert(c.label);
    return out;
}

namespace {

// Indices of the two highest-scoring detections, ties by input order, returned
// in input order.
std::pair<std::size_t, std::size_t> top_two_by_score(std::span<const Detection> dets) {
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
    return std::minmax(order[0], order[1]);
}

std::size_t higher_hand(std::span<const Detection> dets) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < dets.size(); ++i) {
        const Point c = center(dets[i].box);
        const Point b = center(dets[best].box);
        if (c.y < b.y || (c.y == b.y && c.x < b.x)) best = i;
    }
    return best;
}

}  // namespace

AnnotatedFrame annotate_frame(std::int64_t frame_id, std::span<const Detection> detections,
                              const GestureClassMeta& meta) {
    const std::size_t needed = meta.arity == Arity::OneHanded ? 1 : 2;
    if (detections.size() < needed)
        throw Error(Errc::NotEnoughHands, "class '" + meta.label + "' needs " + std::to_string(needed) +
                                              " hand(s), got " + std::to_string(detections.size()));

    AnnotatedFrame out{frame_id, {}};
    out.boxes.reserve(detections.size());

    if (meta.arity == Arity::OneHanded) {
        const std::size_t g = higher_hand(detections);
        out.boxes.push_back({detections[g].box, meta.label});
        for (std::size_t i = 0; i < detections.size(); ++i)
            if (i != g) out.boxes.push_back({detections[i].box, kNoGesture});
        return out;
    }

    const auto [a, b] = top_two_by_score(detections);
    const BBox merged = meta.arity == Arity::TwoHanded
                            ? union_box(detections[a].box, detections[b].box)
                            : xsign_square(detections[a].box, detections[b].box);
    out.boxes.push_back({merged, meta.label});
    for (std::size_t i = 0; i < detections.size(); ++i)
        if (i != a && i != b) out.boxes.push_back({detections[i].box, kNoGesture});
    return out;
}

BBox mirror_box(const BBox& b) noexcept { return {1.0 - b.x2, b.y1, 1.0 - b.x1, b.y2}; }

std::optional<AnnotatedFrame> flip_annotations(const AnnotatedFrame& frame,
                                               const std::set<std::string>& blacklist) {
    for (const auto& lb : frame.boxes)
        if (blacklist.contains(lb.label)) return std::nullopt;
    AnnotatedFrame out = frame;
    for (auto& lb : out.boxes) lb.box = mirror_box(lb.box);
    return out;
}

}  // namespace gtk
