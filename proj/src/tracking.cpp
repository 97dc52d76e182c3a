#include "gtk/tracking.hpp"

#include <algorithm>
#include <tuple>

#include "gtk/error.hpp"

namespace gtk {

void TrackerParams::validate() const {
    if (!(iou_gate >= 0.0 && iou_gate <= 1.0)) throw Error(Errc::InvalidArgument, "iou_gate must lie in [0,1]");
    if (max_age < 0) throw Error(Errc::InvalidArgument, "max_age must be >= 0");
    if (history_len < 2) throw Error(Errc::InvalidArgument, "history_len must be >= 2");
}

Tracker::Tracker(TrackerParams params) : params_(params) { params_.validate(); }

const Track* Tracker::find(std::int64_t id) const noexcept {
    auto it = std::find_if(tracks_.begin(), tracks_.end(), [id](const Track& t) { return t.id == id; });
    return it == tracks_.end() ? nullptr : &*it;
}

AssociationResult Tracker::associate(const FrameDetections& frame) {
    if (last_frame_ && frame.frame <= *last_frame_)
        throw Error(Errc::NonMonotonicFrame, "frame " + std::to_string(frame.frame) +
                                                 " does not follow " + std::to_string(*last_frame_));
    last_frame_ = frame.frame;

    const auto& dets = frame.detections;
    struct Candidate {
        double iou;
        std::size_t track;
        std::size_t det;
    };
    std::vector<Candidate> candidates;
    for (std::size_t t = 0; t < tracks_.size(); ++t)
        for (std::size_t d = 0; d < dets.size(); ++d) {
            const double iou = iou2d(tracks_[t].box, dets[d].box);
            if (iou >= params_.iou_gate && iou > 0.0) candidates.push_back({iou, t, d});
        }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(b.iou, a.track, a.det) < std::tie(a.iou, b.track, b.det);
    });

    std::vector<bool> track_used(tracks_.size(), false);
    std::vector<std::optional<std::size_t>> det_track(dets.size());
    for (const auto& c : candidates) {
        if (track_used[c.track] || det_track[c.det]) continue;
        track_used[c.track] = true;
        det_track[c.det] = c.track;
    }

    AssociationResult result;
    result.assignments.reserve(dets.size());
    auto record = [&](Track& t, const Detection& d) {
        t.box = d.box;
        t.age_since_seen = 0;
        t.history.push_back({frame.frame, d.label, center(d.box), d.box});
        while (t.history.size() > params_.history_len) t.history.pop_front();
    };

    for (std::size_t t = 0; t < tracks_.size(); ++t)
        if (!track_used[t]) ++tracks_[t].age_since_seen;

    for (std::size_t d = 0; d < dets.size(); ++d) {
        if (det_track[d]) {
            Track& t = tracks_[*det_track[d]];
            record(t, dets[d]);
            result.assignments.push_back({d, t.id, false});
        }
    }
    for (std::size_t d = 0; d < dets.size(); ++d) {
        if (det_track[d]) continue;
        Track t;
        t.id = next_id_++;
        record(t, dets[d]);
        result.assignments.push_back({d, t.id, true});
        tracks_.push_back(std::move(t));
    }
    std::sort(result.assignments.begin(), result.assignments.end(),
              [](const Assignment& a, const Assignment& b) { return a.detection < b.detection; });

    auto retired_begin = std::stable_partition(tracks_.begin(), tracks_.end(), [&](const Track& t) {
        return t.age_since_seen <= params_.max_age;
    });
    result.retired.assign(std::make_move_iterator(retired_begin), std::make_move_iterator(tracks_.end()));
    tracks_.erase(retired_begin, tracks_.end());
    return result;
}

}  // namespace gtk
