#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gtk/detection.hpp"
#include "gtk/geometry.hpp"

namespace gtk {

enum class Arity { OneHanded, TwoHanded, TwoHandedXsign };

std::string_view to_string(Arity arity) noexcept;
Arity arity_from_string(std::string_view name);

struct GestureClassMeta {
    std::string label;
    Arity arity = Arity::OneHanded;
    bool mirror_safe = true;
};

/// Gesture class registry; labels are unique.
class ClassRegistry {
public:
    ClassRegistry() = default;
    explicit ClassRegistry(std::vector<GestureClassMeta> classes);

    const GestureClassMeta* find(std::string_view label) const noexcept;
    const std::vector<GestureClassMeta>& classes() const noexcept { return classes_; }

    /// Labels of classes with mirror_safe == false.
    std::set<std::string> mirror_blacklist() const;

private:
    std::vector<GestureClassMeta> classes_;
};

struct LabeledBox {
    BBox box;
    std::string label;

    friend bool operator==(const LabeledBox&, const LabeledBox&) = default;
};

/// The gesture box comes first, followed by the remaining hands as "no_gesture"
/// in input order.
struct AnnotatedFrame {
    std::int64_t frame_id = 0;
    std::vector<LabeledBox> boxes;

    friend bool operator==(const AnnotatedFrame&, const AnnotatedFrame&) = default;
};

/// Marks the gesticulating hand(s) of a frame known to show `meta.label`.
///
/// One-handed: the higher hand (smallest center y, then smallest center x, then
/// input order) carries the label. Two-handed: the two highest-scoring hands are
/// merged with union_box. Xsign: the two highest-scoring hands are replaced by
/// the square spanned by their center distance. Throws Errc::NotEnoughHands.
AnnotatedFrame annotate_frame(std::int64_t frame_id, std::span<const Detection> detections,
                              const GestureClassMeta& meta);

/// Horizontal mirror of every box. Returns nullopt (unchanged) when any label
/// of the frame is in the blacklist.
std::optional<AnnotatedFrame> flip_annotations(const AnnotatedFrame& frame,
                                               const std::set<std::string>& blacklist);

BBox mirror_box(const BBox& b) noexcept;

}  // namespace gtk
