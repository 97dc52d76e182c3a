#include "gtk/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gtk/error.hpp"

namespace gtk {

namespace {

constexpr double kImproveEps = 1e-12;

}  // namespace

std::string_view to_string(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::SwipeLeft: return "swipe_left";
        case EventKind::SwipeRight: return "swipe_right";
        case EventKind::SwipeUp: return "swipe_up";
        case EventKind::SwipeDown: return "swipe_down";
        case EventKind::ZoomIn: return "zoom_in";
        case EventKind::ZoomOut: return "zoom_out";
        case EventKind::Drag: return "drag";
        case EventKind::Drop: return "drop";
        case EventKind::Click: return "click";
        case EventKind::DoubleClick: return "double_click";
    }
    return "click";
}

std::optional<EventKind> event_kind_from_string(std::string_view name) noexcept {
    for (EventKind k : kAllEventKinds)
        if (to_string(k) == name) return k;
    return std::nullopt;
}

void RecognizerConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(Errc::InvalidArgument, what);
    };
    require(swipe_min_disp > 0.0, "swipe_min_disp must be > 0");
    require(swipe_axis_ratio >= 1.0, "swipe_axis_ratio must be >= 1");
    require(swipe_window >= 2, "swipe_window must be >= 2 frames");
    require(zoom_ratio > 1.0, "zoom_ratio must be > 1");
    require(zoom_window >= 2, "zoom_window must be >= 2 frames");
    require(dwell_click_frames >= 2, "dwell_click_frames must be >= 2");
    require(dwell_radius > 0.0, "dwell_radius must be > 0");
    require(double_click_gap >= 0, "double_click_gap must be >= 0");
    require(drag_arm_frames >= 1, "drag_arm_frames must be >= 1");
    require(drag_confirm_frames >= 1, "drag_confirm_frames must be >= 1");
    require(label_purity > 0.0 && label_purity <= 1.0, "label_purity must lie in (0,1]");
    require(cooldown >= 0, "cooldown must be >= 0");
}

ActionMap default_action_map() {
    return {
        {"swipe_left", "swipe left"},
        {"swipe_right", "swipe right"},
        {"swipe_up", "swipe up"},
        {"swipe_down", "swipe down"},
        {"zoom_in", "zoom in content"},
        {"zoom_out", "zoom out content"},
        {"drag", "move objects on the screen"},
        {"drop", "drop objects on the screen"},
        {"click", "click"},
        {"double_click", "double click"},
        // static gestures
        {"thumb_index", "Input number 2"},
        {"point", "Mouse control"},
        {"thumb_index2", "Screenshot of a specific area"},
        {"pinkie", "Input number 1"},
        {"middle_finger", "Express disapproval during a video conference"},
        {"holy", "Express a request during video conferences"},
        {"grip", "Input number 0"},
        {"grabbing", "Move objects on the screen"},
        {"three3", "Input number 3"},
        {"timeout", "Pause content"},
        {"take_photo", "Take a photo / screenshot / selfie"},
        {"xsign", "Shut down the entire system"},
        {"three_gun", "Set the volume to maximum"},
        {"heart", "Like a song / video / add to playlist"},
        {"heart2", "Like a song / video / add to playlist"},
    };
}

std::string map_label(std::string_view label, const ActionMap& map) {
    auto it = map.find(label);
    if (it == map.end()) throw Error(Errc::UnknownKind, "no action for '" + std::string(label) + "'");
    return it->second;
}

std::string map_action(const GestureEvent& event, const ActionMap& map) {
    return map_label(to_string(event.kind), map);
}

void check_action_map_total(const ActionMap& map) {
    for (EventKind k : kAllEventKinds)
        if (!map.contains(to_string(k)))
            throw Error(Errc::UnknownKind, "action map has no entry for '" + std::string(to_string(k)) + "'");
}

std::optional<SwipeResult> swipe_predicate(std::span<const TrackSample> window, const RecognizerConfig& cfg) {
    if (window.size() < 2) return std::nullopt;
    const auto pure = std::count_if(window.begin(), window.end(),
                                    [&](const TrackSample& s) { return cfg.swipe_labels.contains(s.label); });
    if (static_cast<double>(pure) < cfg.label_purity * static_cast<double>(window.size())) return std::nullopt;

    const double dx = window.back().center.x - window.front().center.x;
    const double dy = window.back().center.y - window.front().center.y;
    const bool horizontal = std::abs(dx) >= std::abs(dy);
    const double dominant = horizontal ? std::abs(dx) : std::abs(dy);
    const double minor = horizontal ? std::abs(dy) : std::abs(dx);
    if (dominant < cfg.swipe_min_disp) return std::nullopt;
    if (dominant < cfg.swipe_axis_ratio * minor) return std::nullopt;

    EventKind kind;
    if (horizontal)
        kind = dx > 0 ? EventKind::SwipeRight : EventKind::SwipeLeft;
    else
        kind = dy > 0 ? EventKind::SwipeDown : EventKind::SwipeUp;
    return SwipeResult{kind, dx, dy};
}

std::optional<ZoomResult> zoom_predicate(std::span<const PairSample> window, const RecognizerConfig& cfg) {
    if (window.size() < 2) return std::nullopt;
    const auto pure = std::count_if(window.begin(), window.end(), [](const PairSample& s) { return s.labels_ok; });
    if (static_cast<double>(pure) < cfg.label_purity * static_cast<double>(window.size())) return std::nullopt;

    const double d_start = window.front().distance;
    if (d_start < 1e-6) throw Error(Errc::DegenerateDistance, "initial hand distance below 1e-6");
    const double r = window.back().distance / d_start;
    if (r >= cfg.zoom_ratio) return ZoomResult{EventKind::ZoomIn, r};
    if (r <= 1.0 / cfg.zoom_ratio) return ZoomResult{EventKind::ZoomOut, r};
    return std::nullopt;
}

bool dwell_predicate(std::span<const TrackSample> window, const RecognizerConfig& cfg) {
    if (window.size() < static_cast<std::size_t>(cfg.dwell_click_frames)) return false;
    const auto pure = std::count_if(window.begin(), window.end(),
                                    [&](const TrackSample& s) { return s.label == cfg.click_label; });
    if (static_cast<double>(pure) < cfg.label_purity * static_cast<double>(window.size())) return false;

    Point mean;
    for (const auto& s : window) {
        mean.x += s.center.x;
        mean.y += s.center.y;
    }
    mean.x /= static_cast<double>(window.size());
    mean.y /= static_cast<double>(window.size());
    return std::all_of(window.begin(), window.end(),
                       [&](const TrackSample& s) { return distance(s.center, mean) <= cfg.dwell_radius; });
}

// --- drag and drop ---

std::optional<GestureEvent> DragDropAutomaton::on_sample(const RecognizerConfig& cfg, std::int64_t track_id,
                                                         const TrackSample& sample) {
    last_frame_ = sample.frame;
    const bool arm = sample.label == cfg.drag_arm_label;
    const bool engage = sample.label == cfg.drag_engage_label;

    switch (state_) {
        case State::Idle:
            arm_count_ = arm ? arm_count_ + 1 : 0;
            if (arm_count_ >= cfg.drag_arm_frames) state_ = State::Armed;
            return std::nullopt;

        case State::Armed:
            if (arm) return std::nullopt;
            if (!engage) {
                state_ = State::Idle;
                arm_count_ = 0;
                return std::nullopt;
            }
            state_ = State::Dragging;
            engage_frame_ = sample.frame;
            drag_emitted_ = false;
            path_.assign(1, sample.center);
            break;

        case State::Dragging:
            if (arm) {
                GestureEvent drop{EventKind::Drop, {track_id}, engage_frame_, sample.frame,
                                  PointParams{sample.center}, {}};
                state_ = State::Idle;
                arm_count_ = 1;
                path_.clear();
                return drop;
            }
            if (!engage) return std::nullopt;
            path_.push_back(sample.center);
            break;
    }

    if (!drag_emitted_ && static_cast<std::int64_t>(path_.size()) >= cfg.drag_confirm_frames) {
        drag_emitted_ = true;
        return GestureEvent{EventKind::Drag, {track_id}, engage_frame_, sample.frame, DragParams{path_}, {}};
    }
    return std::nullopt;
}

std::optional<GestureEvent> DragDropAutomaton::on_lost(std::int64_t track_id) {
    std::optional<GestureEvent> out;
    if (state_ == State::Dragging)
        out = GestureEvent{EventKind::Drop, {track_id}, engage_frame_, last_frame_, PointParams{path_.back()}, {}};
    state_ = State::Idle;
    arm_count_ = 0;
    path_.clear();
    return out;
}

// --- click ---

namespace {
std::int64_t upgrade_horizon(const RecognizerConfig& cfg) { return cfg.double_click_gap + cfg.dwell_click_frames - 1; }
}  // namespace

std::optional<GestureEvent> ClickDetector::on_sample(const RecognizerConfig& cfg, std::int64_t track_id,
                                                     std::span<const TrackSample> history) {
    const auto n = static_cast<std::size_t>(cfg.dwell_click_frames);
    if (history.size() < n) {
        latched_ = false;
        return std::nullopt;
    }
    const auto window = history.last(n);
    const bool dwelling = dwell_predicate(window, cfg);
    if (latched_) {
        if (!dwelling) latched_ = false;
        return std::nullopt;
    }
    if (!dwelling || (last_fire_ && window.front().frame <= *last_fire_)) return std::nullopt;

    const std::int64_t now = window.back().frame;
    Point mean;
    for (const auto& s : window) {
        mean.x += s.center.x / static_cast<double>(n);
        mean.y += s.center.y / static_cast<double>(n);
    }
    latched_ = true;
    last_fire_ = now;

    if (pending_ && now - pending_->fired <= upgrade_horizon(cfg)) {
        GestureEvent ev{EventKind::DoubleClick, {track_id}, pending_->start, now, PointParams{mean}, {}};
        pending_.reset();
        return ev;
    }
    pending_ = Pending{window.front().frame, now, mean};
    return std::nullopt;
}

std::optional<GestureEvent> ClickDetector::on_frame(const RecognizerConfig& cfg, std::int64_t track_id,
                                                    std::int64_t frame) {
    if (pending_ && frame - pending_->fired > upgrade_horizon(cfg)) return confirm(track_id);
    return std::nullopt;
}

std::optional<GestureEvent> ClickDetector::on_lost(std::int64_t track_id) {
    latched_ = false;
    if (pending_) return confirm(track_id);
    return std::nullopt;
}

std::optional<GestureEvent> ClickDetector::confirm(std::int64_t track_id) {
    GestureEvent ev{EventKind::Click, {track_id}, pending_->start, pending_->fired, PointParams{pending_->point}, {}};
    pending_.reset();
    return ev;
}

// --- session state ---

DynamicsState::DynamicsState(RecognizerConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

DynamicsState::TrackState& DynamicsState::track_state(std::int64_t id) { return tracks_[id]; }

void DynamicsState::emit(std::vector<GestureEvent>& out, GestureEvent ev, std::int64_t frame) {
    auto key = std::make_pair(ev.track_ids, ev.kind);
    auto it = last_emit_.find(key);
    if (it != last_emit_.end() && frame - it->second < cfg_.cooldown) return;
    last_emit_[key] = frame;
    out.push_back(std::move(ev));
}

void DynamicsState::flush(std::vector<GestureEvent>& out, std::vector<std::int64_t> ids, Continuous& st,
                          std::int64_t frame) {
    if (!st.best.active) return;
    emit(out, GestureEvent{st.best.kind, std::move(ids), st.best.start, st.best.end, st.best.params, {}}, frame);
    st.last_end = st.best.end;
    st.best.active = false;
}

namespace {

std::vector<TrackSample> samples_after(const Track& t, std::int64_t lo) {
    std::vector<TrackSample> out;
    for (const auto& s : t.history)
        if (s.frame > lo) out.push_back(s);
    return out;
}

bool in_cooldown(const std::map<std::pair<std::vector<std::int64_t>, EventKind>, std::int64_t>& last_emit,
                 const std::vector<std::int64_t>& ids, std::span<const EventKind> kinds, std::int64_t frame,
                 std::int64_t cooldown) {
    for (EventKind k : kinds) {
        auto it = last_emit.find({ids, k});
        if (it != last_emit.end() && frame - it->second < cooldown) return true;
    }
    return false;
}

constexpr std::array<EventKind, 4> kSwipeKinds = {EventKind::SwipeLeft, EventKind::SwipeRight, EventKind::SwipeUp,
                                                  EventKind::SwipeDown};
constexpr std::array<EventKind, 2> kZoomKinds = {EventKind::ZoomIn, EventKind::ZoomOut};

double zoom_measure(const ZoomResult& z) { return std::abs(std::log(z.ratio)); }

}  // namespace

void DynamicsState::step_swipe(const Track& t, std::int64_t frame, std::vector<GestureEvent>& out) {
    auto& st = track_state(t.id).swipe;
    if (t.last_seen() != frame) {
        flush(out, {t.id}, st, frame);
        return;
    }
    const auto window = samples_after(t, std::max(frame - cfg_.swipe_window, st.last_end));
    const auto res = swipe_predicate(window, cfg_);
    const double measure = res ? std::max(std::abs(res->dx), std::abs(res->dy)) : 0.0;

    if (st.best.active) {
        if (res && res->kind == st.best.kind && measure > st.best.measure + kImproveEps) {
            st.best.measure = measure;
            st.best.start = window.front().frame;
            st.best.end = frame;
            st.best.params = SwipeParams{res->dx, res->dy};
        } else {
            flush(out, {t.id}, st, frame);
        }
        return;
    }
    if (res && !in_cooldown(last_emit_, {t.id}, kSwipeKinds, frame, cfg_.cooldown))
        st.best = Extremum{true, res->kind, measure, window.front().frame, frame, SwipeParams{res->dx, res->dy}};
}

void DynamicsState::step_single_zoom(const Track& t, std::int64_t frame, std::vector<GestureEvent>& out) {
    auto& st = track_state(t.id).single_zoom;
    if (t.last_seen() != frame) {
        flush(out, {t.id}, st, frame);
        return;
    }
    std::vector<PairSample> window;
    for (const auto& s : samples_after(t, std::max(frame - cfg_.zoom_window, st.last_end)))
        window.push_back({s.frame, std::hypot(s.box.width(), s.box.height()),
                          cfg_.single_hand_zoom_labels.contains(s.label)});
    std::optional<ZoomResult> res;
    if (window.size() >= 2 && window.front().distance >= 1e-6) res = zoom_predicate(window, cfg_);

    if (st.best.active) {
        if (res && res->kind == st.best.kind && zoom_measure(*res) > st.best.measure + kImproveEps)
            st.best = Extremum{true, res->kind, zoom_measure(*res), window.front().frame, frame,
                               ZoomParams{res->ratio, window.front().distance, window.back().distance}};
        else
            flush(out, {t.id}, st, frame);
        return;
    }
    if (res && !in_cooldown(last_emit_, {t.id}, kZoomKinds, frame, cfg_.cooldown))
        st.best = Extremum{true, res->kind, zoom_measure(*res), window.front().frame, frame,
                           ZoomParams{res->ratio, window.front().distance, window.back().distance}};
}

void DynamicsState::step_zoom_pair(const Track& a, const Track& b, std::int64_t frame,
                                   std::vector<GestureEvent>& out) {
    const PairKey key{a.id, b.id};
    auto found = pairs_.find(key);
    const bool both_seen = a.last_seen() == frame && b.last_seen() == frame;
    if (!both_seen) {
        if (found != pairs_.end()) flush(out, {a.id, b.id}, found->second, frame);
        return;
    }
    auto& st = pairs_[key];
    const std::int64_t lo = std::max(frame - cfg_.zoom_window, st.last_end);

    std::vector<PairSample> window;
    auto ia = a.history.begin();
    auto ib = b.history.begin();
    while (ia != a.history.end() && ib != b.history.end()) {
        if (ia->frame < ib->frame) {
            ++ia;
        } else if (ib->frame < ia->frame) {
            ++ib;
        } else {
            if (ia->frame > lo)
                window.push_back({ia->frame, distance(ia->center, ib->center),
                                  cfg_.zoom_two_hand_labels.contains(ia->label) &&
                                      cfg_.zoom_two_hand_labels.contains(ib->label)});
            ++ia;
            ++ib;
        }
    }
    std::optional<ZoomResult> res;
    if (window.size() >= 2 && window.front().distance >= 1e-6) res = zoom_predicate(window, cfg_);

    auto candidate = [&] {
        return Extremum{true, res->kind, zoom_measure(*res), window.front().frame, frame,
                        ZoomParams{res->ratio, window.front().distance, window.back().distance}};
    };
    if (st.best.active) {
        if (res && res->kind == st.best.kind && zoom_measure(*res) > st.best.measure + kImproveEps) {
            st.best = candidate();
        } else {
            flush(out, {a.id, b.id}, st, frame);
        }
        return;
    }
    if (res && !in_cooldown(last_emit_, {a.id, b.id}, kZoomKinds, frame, cfg_.cooldown)) st.best = candidate();
}

std::vector<GestureEvent> DynamicsState::step(std::span<const Track> live, std::span<const Track> retired,
                                              std::int64_t frame) {
    if (last_frame_ && frame <= *last_frame_)
        throw Error(Errc::NonMonotonicFrame,
                    "frame " + std::to_string(frame) + " does not follow " + std::to_string(*last_frame_));
    last_frame_ = frame;

    std::vector<GestureEvent> out;

    std::vector<const Track*> gone;
    for (const auto& t : retired) gone.push_back(&t);
    std::sort(gone.begin(), gone.end(), [](const Track* x, const Track* y) { return x->id < y->id; });
    for (const Track* t : gone) {
        auto it = tracks_.find(t->id);
        if (it == tracks_.end()) continue;
        // Continuous candidates are normally flushed on the first unseen frame;
        // with max_age 0 that frame is the retirement frame.
        flush(out, {t->id}, it->second.swipe, frame);
        flush(out, {t->id}, it->second.single_zoom, frame);
        for (auto& [key, st] : pairs_)
            if (key.first == t->id || key.second == t->id) flush(out, {key.first, key.second}, st, frame);
        if (auto ev = it->second.dragdrop.on_lost(t->id)) emit(out, std::move(*ev), frame);
        if (auto ev = it->second.click.on_lost(t->id)) emit(out, std::move(*ev), frame);
        tracks_.erase(it);
        std::erase_if(pairs_, [id = t->id](const auto& kv) { return kv.first.first == id || kv.first.second == id; });
    }

    std::vector<const Track*> order;
    for (const auto& t : live) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](const Track* x, const Track* y) { return x->id < y->id; });

    for (const Track* t : order) {
        auto& ts = track_state(t->id);
        if (auto ev = ts.click.on_frame(cfg_, t->id, frame)) emit(out, std::move(*ev), frame);
        if (t->last_seen() == frame) {
            if (auto ev = ts.dragdrop.on_sample(cfg_, t->id, t->history.back())) emit(out, std::move(*ev), frame);
            const std::vector<TrackSample> hist(t->history.begin(), t->history.end());
            if (auto ev = ts.click.on_sample(cfg_, t->id, hist)) emit(out, std::move(*ev), frame);
        }
        step_swipe(*t, frame, out);
        if (cfg_.single_hand_zoom) step_single_zoom(*t, frame, out);
    }

    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j) step_zoom_pair(*order[i], *order[j], frame, out);

    return out;
}

// --- engine ---

Engine::Engine(RecognizerConfig cfg, TrackerParams tracker, ActionMap actions)
    : tracker_(tracker), dynamics_(std::move(cfg)), actions_(std::move(actions)) {
    check_action_map_total(actions_);
}

std::vector<GestureEvent> Engine::process(const FrameDetections& frame) {
    const auto assoc = tracker_.associate(frame);
    auto events = dynamics_.step(tracker_.tracks(), assoc.retired, frame.frame);
    for (auto& ev : events) ev.action = map_action(ev, actions_);
    return events;
}

}  // namespace gtk
