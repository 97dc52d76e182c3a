#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gtk/interval.hpp"

namespace gtk {

/// Numerator convention of the window IoU score.
///   Eq1:        max(0, min(w_end,s_end) - max(w_start,s_start)) / window size
///   FrameCount: number of sign frames inside the window / window size
enum class IouMode { Eq1, FrameCount };

std::string_view to_string(IouMode mode) noexcept;
IouMode iou_mode_from_string(std::string_view name);

/// Share of the window covered by the sign, clamped to [0,1]. The no-event
/// sentinel scores 1.
double iou_score(const Window& w, const SignBoundary& s, IouMode mode = IouMode::FrameCount);

/// Multiplies every class score by `iou`; no-event clips keep their scores.
std::vector<double> scale_scores(std::span<const double> class_scores, double iou, bool is_no_event);

/// -iou * log(probs[target]). `grad`, when given, receives d loss / d probs.
/// Throws Errc::InvalidArgument if probs is not a probability vector (sum
/// within 1e-6 of one) and Errc::DegenerateProb when probs[target] <= 1e-12.
double iou_balanced_ce(std::span<const double> probs, std::size_t target, double iou,
                       std::vector<double>* grad = nullptr);

/// Huber penalty of one residual.
double huber_element(double e, double delta);
/// d/de of huber_element.
double huber_derivative(double e, double delta);

struct BoundaryPair {
    double start = 0.0;
    double end = 0.0;

    friend bool operator==(const BoundaryPair&, const BoundaryPair&) = default;
};

/// Sum of huber_element over both boundary residuals. Throws for delta <= 0.
double huber(const BoundaryPair& pred, const BoundaryPair& truth, double delta = 1.0);

/// Sign boundaries normalized by clip_len - 1; (0,0) for no-event clips.
BoundaryPair regression_targets(const SignBoundary& s, std::int64_t clip_len);

struct ScoredWindow {
    Window window;
    double iou = 0.0;
    std::vector<double> class_scores;
    BoundaryPair target;

    friend bool operator==(const ScoredWindow&, const ScoredWindow&) = default;
};

/// IoU and window-relative regression targets of one window over a video.
ScoredWindow score_window(const Window& w, const SignBoundary& sign, IouMode mode,
                          std::span<const double> class_scores = {});

}  // namespace gtk
