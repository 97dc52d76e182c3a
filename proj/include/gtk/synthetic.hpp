#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gtk/detection.hpp"
#include "gtk/dynamics.hpp"

namespace gtk {

/// Scripted detection traces, one per event kind, that exercise exactly one
/// recognizer under the default RecognizerConfig. Every trace starts with 5
/// empty frames; boxes are 0.12 wide (0.10 for two-hand traces) and scored 0.9.
///
///   swipe_*       one "point" hand travels 0.5 along one axis in 21 frames,
///                 then leaves (displacement 2x swipe_min_disp)
///   zoom_out      two "thumb_index2" hands, center distance 0.5 -> 0.2 over
///                 25 frames, then leave (|log r| > 2x |log zoom_ratio|)
///   zoom_in       same with distance 0.2 -> 0.5
///   drag          "grabbing" x6, then "grip" x24 moving 0.3 to the right; the
///                 trace ends while still gripping
///   drop          "grabbing" x6, "grip" x4 in place, "grabbing" x10, then leaves
///   click         "point" held still for 30 frames, then leaves
///   double_click  "point" still x14, "no_gesture" x8, "point" still x14, then leaves
///   none          one "no_gesture" hand, 1000 frames
///
/// `noise_sigma` jitters every box center with N(0, sigma) per axis.
std::vector<FrameDetections> generate_trace(std::optional<EventKind> kind, double noise_sigma = 0.0,
                                            std::uint64_t seed = 0);

/// "none" or an event kind name. Throws Errc::UnknownKind.
std::optional<EventKind> trace_kind_from_string(std::string_view name);

}  // namespace gtk
