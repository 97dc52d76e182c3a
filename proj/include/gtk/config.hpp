#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "gtk/annotate.hpp"
#include "gtk/clipaug.hpp"
#include "gtk/dynamics.hpp"
#include "gtk/scoring.hpp"
#include "gtk/stream.hpp"
#include "gtk/tracking.hpp"

namespace gtk {

inline constexpr int kConfigVersion = 1;

/// Everything the command-line tool can be configured with. Loaded from a
/// versioned JSON file in which unknown keys are errors:
///
///   {"version": 1,
///    "recognizer": {"swipe_min_disp": 0.25, ...},
///    "tracker": {"iou_gate": 0.3, "max_age": 15, "history_len": 64},
///    "augment": {"drop_ratio": 0.1, "shift": [-5, 5], ...},
///    "iou_mode": "frame_count",
///    "blacklist": ["..."],
///    "actions": {"zoom_out": "..."},
///    "seed": 0}
///
/// Missing keys keep their defaults; "actions" entries override the default map.
struct Config {
    RecognizerConfig recognizer{};
    TrackerParams tracker{};
    AugmentParams augment{};
    IouMode iou_mode = IouMode::FrameCount;
    std::set<std::string> blacklist;
    ActionMap actions = default_action_map();
    std::uint64_t seed = 0;

    void validate() const;
    EngineSettings engine_settings() const { return {recognizer, tracker, actions}; }
};

/// Throws Errc::MalformedJson or Errc::SchemaViolation (with the offending key path).
Config parse_config(std::string_view text);
Config load_config(const std::string& path);

/// Gesture registry file:
///   {"version": 1, "target": "point" (optional),
///    "classes": [{"label": "point", "arity": "one_handed", "mirror_safe": true}, ...]}
struct RegistryFile {
    ClassRegistry registry;
    std::optional<std::string> target;
};

RegistryFile parse_registry(std::string_view text);
RegistryFile load_registry(const std::string& path);

/// Static gestures with a listed application, with their hand arity.
ClassRegistry default_gesture_registry();

std::string read_file(const std::string& path);

}  // namespace gtk
