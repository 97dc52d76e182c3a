#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gtk/detection.hpp"
#include "gtk/geometry.hpp"
#include "gtk/tracking.hpp"

namespace gtk {

enum class EventKind {
    SwipeLeft,
    SwipeRight,
    SwipeUp,
    SwipeDown,
    ZoomIn,
    ZoomOut,
    Drag,
    Drop,
    Click,
    DoubleClick,
};

inline constexpr std::array<EventKind, 10> kAllEventKinds = {
    EventKind::SwipeLeft, EventKind::SwipeRight, EventKind::SwipeUp, EventKind::SwipeDown,
    EventKind::ZoomIn,    EventKind::ZoomOut,    EventKind::Drag,    EventKind::Drop,
    EventKind::Click,     EventKind::DoubleClick,
};

std::string_view to_string(EventKind kind) noexcept;
std::optional<EventKind> event_kind_from_string(std::string_view name) noexcept;

struct SwipeParams {
    double dx = 0.0;
    double dy = 0.0;
};

struct ZoomParams {
    double ratio = 1.0;
    double d_start = 0.0;
    double d_end = 0.0;
};

struct DragParams {
    std::vector<Point> path;
};

/// Dwell point for clicks, release point for drops.
struct PointParams {
    Point point;
};

using EventParams = std::variant<SwipeParams, ZoomParams, DragParams, PointParams>;

struct GestureEvent {
    EventKind kind = EventKind::Click;
    std::vector<std::int64_t> track_ids;
    std::int64_t start_frame = 0;
    std::int64_t end_frame = 0;
    EventParams params;
    std::string action;
};

/// Thresholds of every dynamic-gesture recognizer. Lengths are in normalized
/// image units, durations in frames.
struct RecognizerConfig {
    std::set<std::string> swipe_labels{"point", "thumb_index"};
    double swipe_min_disp = 0.25;
    double swipe_axis_ratio = 2.0;
    std::int64_t swipe_window = 30;

    std::set<std::string> zoom_two_hand_labels{"thumb_index2", "thumb_index"};
    double zoom_ratio = 1.5;
    std::int64_t zoom_window = 30;
    bool single_hand_zoom = false;
    std::set<std::string> single_hand_zoom_labels{"thumb_index"};

    std::string click_label = "point";
    std::int64_t dwell_click_frames = 12;
    double dwell_radius = 0.03;
    std::int64_t double_click_gap = 20;

    std::string drag_arm_label = "grabbing";
    std::string drag_engage_label = "grip";
    std::int64_t drag_arm_frames = 3;
    std::int64_t drag_confirm_frames = 10;

    double label_purity = 0.8;
    std::int64_t cooldown = 15;

    void validate() const;
};

/// Maps event kinds and static gesture labels to action strings.
using ActionMap = std::map<std::string, std::string, std::less<>>;

ActionMap default_action_map();

/// Throws Errc::UnknownKind when the map has no entry for the event kind.
std::string map_action(const GestureEvent& event, const ActionMap& map);

/// Static-label pass-through ("timeout" -> "Pause content").
std::string map_label(std::string_view label, const ActionMap& map);

/// Throws Errc::UnknownKind unless every event kind has an action.
void check_action_map_total(const ActionMap& map);

struct SwipeResult {
    EventKind kind = EventKind::SwipeRight;
    double dx = 0.0;
    double dy = 0.0;
};

/// Evaluates the swipe conditions on a window of track samples: label purity,
/// net displacement along the dominant axis, and dominant/minor axis ratio.
std::optional<SwipeResult> swipe_predicate(std::span<const TrackSample> window, const RecognizerConfig& cfg);

/// One frame on which both hands of a pair were observed.
struct PairSample {
    std::int64_t frame = 0;
    double distance = 0.0;
    bool labels_ok = false;
};

struct ZoomResult {
    EventKind kind = EventKind::ZoomIn;
    double ratio = 1.0;
};

/// r = d_end / d_start; zoom_in when r >= zoom_ratio, zoom_out when
/// r <= 1/zoom_ratio. Throws Errc::DegenerateDistance when d_start < 1e-6.
std::optional<ZoomResult> zoom_predicate(std::span<const PairSample> window, const RecognizerConfig& cfg);

/// True when the window holds dwell_click_frames samples at click-label purity
/// and every center lies within dwell_radius of the window mean.
bool dwell_predicate(std::span<const TrackSample> window, const RecognizerConfig& cfg);

/// Grab-and-move automaton for one track.
///
///   IDLE --arm label sustained drag_arm_frames--> ARMED
///   ARMED --engage label--> DRAGGING
///   DRAGGING --engage label held drag_confirm_frames--> emit drag (path so far)
///   DRAGGING --arm label or track lost--> emit drop, IDLE
class DragDropAutomaton {
public:
    enum class State { Idle, Armed, Dragging };

    std::optional<GestureEvent> on_sample(const RecognizerConfig& cfg, std::int64_t track_id,
                                          const TrackSample& sample);
    std::optional<GestureEvent> on_lost(std::int64_t track_id);

    State state() const noexcept { return state_; }

private:
    State state_ = State::Idle;
    std::int64_t arm_count_ = 0;
    std::int64_t engage_frame_ = 0;
    std::int64_t last_frame_ = 0;
    bool drag_emitted_ = false;
    std::vector<Point> path_;
};

/// Dwell-click detector for one track. A click is confirmed only once no second
/// dwell can still turn it into a double click; a second dwell inside that
/// window emits double_click instead.
class ClickDetector {
public:
    /// Call on frames where the track was observed; `history` ends at this frame.
    std::optional<GestureEvent> on_sample(const RecognizerConfig& cfg, std::int64_t track_id,
                                          std::span<const TrackSample> history);
    /// Call every frame after on_sample; confirms a pending click whose window expired.
    std::optional<GestureEvent> on_frame(const RecognizerConfig& cfg, std::int64_t track_id,
                                         std::int64_t frame);
    std::optional<GestureEvent> on_lost(std::int64_t track_id);

private:
    struct Pending {
        std::int64_t start = 0;
        std::int64_t fired = 0;
        Point point;
    };
    std::optional<GestureEvent> confirm(std::int64_t track_id);

    bool latched_ = false;
    std::optional<std::int64_t> last_fire_;
    std::optional<Pending> pending_;
};

/// Per-session recognizer state fed with tracker output once per frame.
class DynamicsState {
public:
    explicit DynamicsState(RecognizerConfig cfg = {});

    /// `live` are the tracker's current tracks, `retired` those dropped at this
    /// frame. Throws Errc::NonMonotonicFrame.
    std::vector<GestureEvent> step(std::span<const Track> live, std::span<const Track> retired,
                                   std::int64_t frame);

    const RecognizerConfig& config() const noexcept { return cfg_; }

private:
    struct Extremum {
        bool active = false;
        EventKind kind = EventKind::SwipeRight;
        double measure = 0.0;
        std::int64_t start = 0;
        std::int64_t end = 0;
        EventParams params;
    };
    /// Swipe or zoom candidate: the best window seen so far is reported once
    /// the measure stops growing or a hand disappears.
    struct Continuous {
        Extremum best;
        std::int64_t last_end = std::numeric_limits<std::int64_t>::min();
    };
    struct TrackState {
        Continuous swipe;
        Continuous single_zoom;
        DragDropAutomaton dragdrop;
        ClickDetector click;
    };
    using PairKey = std::pair<std::int64_t, std::int64_t>;

    TrackState& track_state(std::int64_t id);
    void emit(std::vector<GestureEvent>& out, GestureEvent ev, std::int64_t frame);
    void flush(std::vector<GestureEvent>& out, std::vector<std::int64_t> ids, Continuous& st, std::int64_t frame);
    void step_swipe(const Track& t, std::int64_t frame, std::vector<GestureEvent>& out);
    void step_single_zoom(const Track& t, std::int64_t frame, std::vector<GestureEvent>& out);
    void step_zoom_pair(const Track& a, const Track& b, std::int64_t frame, std::vector<GestureEvent>& out);

    RecognizerConfig cfg_;
    std::optional<std::int64_t> last_frame_;
    std::map<std::int64_t, TrackState> tracks_;
    std::map<PairKey, Continuous> pairs_;
    std::map<std::pair<std::vector<std::int64_t>, EventKind>, std::int64_t> last_emit_;
};

/// Tracker, recognizers and action mapping for one session.
class Engine {
public:
    explicit Engine(RecognizerConfig cfg = {}, TrackerParams tracker = {}, ActionMap actions = default_action_map());

    std::vector<GestureEvent> process(const FrameDetections& frame);

    const Tracker& tracker() const noexcept { return tracker_; }

private:
    Tracker tracker_;
    DynamicsState dynamics_;
    ActionMap actions_;
};

}  // namespace gtk
