#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "gtk/detection.hpp"
#include "gtk/geometry.hpp"

namespace gtk {

struct TrackerParams {
    double iou_gate = 0.3;
    std::int64_t max_age = 15;
    std::size_t history_len = 64;

    void validate() const;
};

/// One frame of a track's history. Only frames where the hand was observed are
/// recorded.
struct TrackSample {
    std::int64_t frame = 0;
    std::string label;
    Point center;
    BBox box;
};

struct Track {
    std::int64_t id = 0;
    std::deque<TrackSample> history;  // strictly increasing frames, bounded by history_len
    BBox box;
    std::int64_t age_since_seen = 0;

    std::int64_t last_seen() const { return history.back().frame; }
    const std::string& label() const { return history.back().label; }
};

struct Assignment {
    std::size_t detection = 0;
    std::int64_t track_id = 0;
    bool spawned = false;
};

struct AssociationResult {
    std::vector<Assignment> assignments;  // one per detection, in detection order
    std::vector<Track> retired;           // tracks dropped this frame
};

/// Greedy IoU tracker. Pairs are matched in descending IoU (ties by track
/// creation order, then detection order); pairs below the gate never match.
class Tracker {
public:
    explicit Tracker(TrackerParams params = {});

    AssociationResult associate(const FrameDetections& frame);

    const std::vector<Track>& tracks() const noexcept { return tracks_; }
    const Track* find(std::int64_t id) const noexcept;
    std::optional<std::int64_t> last_frame() const noexcept { return last_frame_; }
    const TrackerParams& params() const noexcept { return params_; }

private:
    TrackerParams params_;
    std::vector<Track> tracks_;
    std::int64_t next_id_ = 0;
    std::optional<std::int64_t> last_frame_;
};

}  // namespace gtk
