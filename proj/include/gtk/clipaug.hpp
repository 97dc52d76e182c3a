#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gtk/interval.hpp"

namespace gtk {

using Rng = std::mt19937_64;

/// Frame-index plan of one training clip.
///
/// `indices` are source-video frames in output order. `source_sign` is the sign
/// in source frames; `sign` is the same sign expressed in output positions and
/// is recomputed by every operation.
struct ClipPlan {
    std::vector<std::int64_t> indices;
    SignBoundary sign = SignBoundary::none();
    SignBoundary source_sign = SignBoundary::none();
    std::int64_t video_len = 1;
    std::int64_t step = 1;  // source stride used when sampling continues to the right

    std::size_t length() const noexcept { return indices.size(); }

    /// Non-empty, non-decreasing indices inside [0, video_len), and a sign that
    /// is either the sentinel or inside [0, length).
    bool satisfies_invariants() const noexcept;

    friend bool operator==(const ClipPlan&, const ClipPlan&) = default;
};

struct ShiftInterval {
    std::int64_t lo = -5;
    std::int64_t hi = 5;
};

struct AugmentParams {
    std::int64_t speed_factor = 2;
    std::int64_t slow_factor = 2;
    double drop_ratio = 0.1;
    double add_ratio = 0.3;
    ShiftInterval shift{};
    double p_drop = 0.5;
    double p_add = 0.25;
    double p_speed = 0.25;
    double p_slow = 0.25;

    void validate() const;
};

/// Positions start, start+step, ... over a video; positions past the end repeat
/// the last frame. `source_sign` is given in video frames.
ClipPlan sample_window(std::int64_t video_len, std::size_t size = 32, std::int64_t step = 2,
                       std::int64_t start = 0, SignBoundary source_sign = SignBoundary::none());

/// Continue the plan to `new_len` entries by sampling further right with the
/// plan's stride, repeating the last video frame once the video is exhausted.
ClipPlan extend_right(const ClipPlan& plan, std::size_t new_len);

/// Output position of the sign after reindexing: first position whose source
/// frame is >= start, last position whose source frame is <= end. An empty
/// intersection yields the sentinel.
SignBoundary remap_boundary(const SignBoundary& sign, std::span<const std::int64_t> indices);

/// Keep every factor-th frame of the plan extended to length * factor.
ClipPlan speed_up(const ClipPlan& plan, std::int64_t factor);

/// Repeat each of the first ceil(length / factor) frames factor times.
ClipPlan slow_down(const ClipPlan& plan, std::int64_t factor);

/// round(len / (1 - drop_ratio)), halves rounded up.
std::size_t drop_extended_length(std::size_t len, double drop_ratio);

/// Extend to drop_extended_length, pick `length` positions uniformly without
/// replacement, keep them in order.
ClipPlan random_drop(const ClipPlan& plan, double drop_ratio, Rng& rng);

/// Same as random_drop, also reporting the chosen extended positions.
ClipPlan random_drop(const ClipPlan& plan, double drop_ratio, Rng& rng, std::vector<std::size_t>* chosen);

/// Duplicate ceil(add_ratio * length) distinct positions in place, then cut the
/// tail back to the original length. add_ratio == 0 is the identity.
ClipPlan random_add(const ClipPlan& plan, double add_ratio, Rng& rng);

/// Widen the sign by `left` frames at the start and `right` frames at the end
/// (negative values shrink it), clamped to [0, clip_len). Returns the input
/// unchanged if the result would be inverted.
SignBoundary shift_boundary(const SignBoundary& sign, std::int64_t left, std::int64_t right, std::int64_t clip_len);

/// shift_boundary with both offsets drawn uniformly from the interval. Inverted
/// draws are redrawn up to 8 times before falling back to the unshifted sign.
SignBoundary boundary_shift(const SignBoundary& sign, ShiftInterval interval, std::int64_t clip_len, Rng& rng);

/// Applies boundary_shift to the plan's source sign and remaps it.
ClipPlan shift_plan(const ClipPlan& plan, ShiftInterval interval, Rng& rng);

// --- pipelines ---

struct SpeedUpOp { std::int64_t factor = 2; };
struct SlowDownOp { std::int64_t factor = 2; };
struct DropOp { double ratio = 0.1; };
struct AddOp { double ratio = 0.3; };
struct ShiftOp { ShiftInterval interval{}; };
/// One of the four speed modifications drawn by the configured probabilities,
/// followed by a boundary shift.
struct RandomOp {};
struct IdentityOp {};

using AugmentOp = std::variant<SpeedUpOp, SlowDownOp, DropOp, AddOp, ShiftOp, RandomOp, IdentityOp>;

/// Parses a comma-separated pipeline such as "speedup:2,drop:0.1,shift:-5:5".
/// Ops without arguments ("speedup", "shift", "random") take values from
/// `params`. Throws Errc::InvalidArgument.
std::vector<AugmentOp> parse_pipeline(std::string_view text, const AugmentParams& params = {});

std::string describe(const AugmentOp& op);

struct PipelineResult {
    ClipPlan plan;
    std::vector<std::string> applied;  // realized ops, in order
};

PipelineResult apply_pipeline(const ClipPlan& plan, std::span<const AugmentOp> ops, const AugmentParams& params,
                              Rng& rng);

}  // namespace gtk
