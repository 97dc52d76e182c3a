#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gtk/geometry.hpp"

namespace gtk {

inline constexpr const char* kNoGesture = "no_gesture";

struct Detection {
    std::string label;
    double score = 1.0;
    BBox box;

    friend bool operator==(const Detection&, const Detection&) = default;
};

/// All hand detections of one video frame.
struct FrameDetections {
    std::int64_t frame = 0;
    std::optional<std::int64_t> ts_ms;
    std::vector<Detection> detections;

    friend bool operator==(const FrameDetections&, const FrameDetections&) = default;
};

}  // namespace gtk
