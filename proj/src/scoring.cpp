#include "gtk/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gtk/error.hpp"

namespace gtk {

std::string_view to_string(IouMode mode) noexcept { return mode == IouMode::Eq1 ? "eq1" : "frame_count"; }

IouMode iou_mode_from_string(std::string_view name) {
    if (name == "eq1") return IouMode::Eq1;
    if (name == "frame_count") return IouMode::FrameCount;
    throw Error(Errc::InvalidArgument, "unknown iou mode '" + std::string(name) + "'");
}

double iou_score(const Window& w, const SignBoundary& s, IouMode mode) {
    if (w.start < 0 || w.end < w.start) throw Error(Errc::InvalidArgument, "invalid window");
    if (s.no_event) return 1.0;
    if (s.start < 0 || s.end < s.start) throw Error(Errc::InvalidArgument, "invalid sign boundary");
    const std::int64_t overlap = std::min(w.end, s.end) - std::max(w.start, s.start);
    const std::int64_t num = mode == IouMode::Eq1 ? std::max<std::int64_t>(0, overlap)
                                                  : std::max<std::int64_t>(0, overlap + 1);
    return std::clamp(static_cast<double>(num) / static_cast<double>(w.size()), 0.0, 1.0);
}

std::vector<double> scale_scores(std::span<const double> class_scores, double iou, bool is_no_event) {
    const double m = is_no_event ? 1.0 : iou;
    std::vector<double> out(class_scores.begin(), class_scores.end());
    for (double& v : out) v *= m;
    return out;
}

double iou_balanced_ce(std::span<const double> probs, std::size_t target, double iou, std::vector<double>* grad) {
    if (target >= probs.size()) throw Error(Errc::InvalidArgument, "target class out of range");
    for (double p : probs)
        if (!std::isfinite(p) || p < 0.0) throw Error(Errc::InvalidArgument, "probabilities must be finite and >= 0");
    const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-6) throw Error(Errc::InvalidArgument, "probabilities must sum to 1");
    const double pt = probs[target];
    if (pt <= 1e-12) throw Error(Errc::DegenerateProb, "target probability <= 1e-12");

    if (grad) {
        grad->assign(probs.size(), 0.0);
        (*grad)[target] = -iou / pt;
    }
    return -iou * std::log(pt);
}

double huber_element(double e, double delta) {
    const double a = std::abs(e);
    return a <= delta ? 0.5 * e * e : delta * (a - 0.5 * delta);
}

double huber_derivative(double e, double delta) {
    if (std::abs(e) <= delta) return e;
    return e > 0 ? delta : -delta;
}

double huber(const BoundaryPair& pred, const BoundaryPair& truth, double delta) {
    if (!(delta > 0.0)) throw Error(Errc::InvalidArgument, "huber delta must be > 0");
    return huber_element(pred.start - truth.start, delta) + huber_element(pred.end - truth.end, delta);
}

BoundaryPair regression_targets(const SignBoundary& s, std::int64_t clip_len) {
    if (s.no_event) return {0.0, 0.0};
    if (clip_len < 1 || !s.valid_within(clip_len)) throw Error(Errc::InvalidArgument, "sign outside the clip");
    if (clip_len == 1) return {0.0, 0.0};
    const double denom = static_cast<double>(clip_len - 1);
    return {static_cast<double>(s.start) / denom, static_cast<double>(s.end) / denom};
}

ScoredWindow score_window(const Window& w, const SignBoundary& sign, IouMode mode,
                          std::span<const double> class_scores) {
    ScoredWindow out;
    out.window = w;
    out.iou = iou_score(w, sign, mode);
    out.class_scores = scale_scores(class_scores, out.iou, sign.no_event);

    SignBoundary local = SignBoundary::none();
    if (!sign.no_event) {
        const std::int64_t s = std::max(sign.start, w.start);
        const std::int64_t e = std::min(sign.end, w.end);
        if (s <= e) local = {s - w.start, e - w.start, false};
    }
    out.target = regression_targets(local, w.size());
    return out;
}

}  // namespace gtk
