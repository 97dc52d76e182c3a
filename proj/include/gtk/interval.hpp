#pragma once

#include <cstdint>

namespace gtk {

/// Inclusive frame interval of a sign inside a video or clip. A boundary with
/// `no_event` set is the sentinel for clips that contain no sign; its frames
/// are (0,0).
struct SignBoundary {
    std::int64_t start = 0;
    std::int64_t end = 0;
    bool no_event = false;

    static constexpr SignBoundary none() noexcept { return {0, 0, true}; }

    /// Sentinel, or 0 <= start <= end < length.
    constexpr bool valid_within(std::int64_t length) const noexcept {
        if (no_event) return start == 0 && end == 0;
        return start >= 0 && start <= end && end < length;
    }

    friend bool operator==(const SignBoundary&, const SignBoundary&) = default;
};

/// Inclusive window of frame positions.
struct Window {
    std::int64_t start = 0;
    std::int64_t end = 0;

    constexpr std::int64_t size() const noexcept { return end - start + 1; }
    friend bool operator==(const Window&, const Window&) = default;
};

}  // namespace gtk
