#include "gtk/kernels.hpp"

#include <algorithm>
#include <exception>
#include <optional>

namespace gtk::kernels {

namespace {

// Exceptions may not leave an OpenMP region; items record their failure and the
// lowest failing index is rethrown afterwards.
void rethrow_first(std::vector<std::optional<Error>>& errors) {
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (errors[i]) throw ItemError(i, *errors[i]);
}

}  // namespace

std::vector<Window> sliding_windows(std::int64_t video_len, std::int64_t size, std::int64_t stride) {
    if (video_len < 1 || size < 1 || stride < 1)
        throw Error(Errc::InvalidArgument, "video length, window size and stride must be >= 1");
    std::vector<Window> out;
    if (video_len < size) {
        out.push_back({0, size - 1});
        return out;
    }
    for (std::int64_t s = 0; s + size <= video_len; s += stride) out.push_back({s, s + size - 1});
    return out;
}

std::vector<ScoredWindow> score_windows_serial(std::int64_t video_len, const SignBoundary& sign, std::int64_t size,
                                               std::int64_t stride, IouMode mode) {
    const auto windows = sliding_windows(video_len, size, stride);
    std::vector<ScoredWindow> out;
    out.reserve(windows.size());
    for (const auto& w : windows) out.push_back(score_window(w, sign, mode));
    return out;
}

std::vector<ScoredWindow> score_windows(std::int64_t video_len, const SignBoundary& sign, std::int64_t size,
                                        std::int64_t stride, IouMode mode) {
    if (!sign.no_event && (sign.start < 0 || sign.end < sign.start))
        throw Error(Errc::InvalidArgument, "invalid sign boundary");
    const auto windows = sliding_windows(video_len, size, stride);
    std::vector<ScoredWindow> out(windows.size());
    const auto n = static_cast<std::ptrdiff_t>(windows.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = score_window(windows[i], sign, mode);
    return out;
}

std::vector<AnnotatedFrame> annotate_batch_serial(std::span<const AnnotationJob> jobs) {
    std::vector<AnnotatedFrame> out;
    out.reserve(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        try {
            out.push_back(annotate_frame(jobs[i].frame->frame, jobs[i].frame->detections, *jobs[i].meta));
        } catch (const Error& e) {
            throw ItemError(i, e);
        }
    }
    return out;
}

std::vector<AnnotatedFrame> annotate_batch(std::span<const AnnotationJob> jobs) {
    std::vector<AnnotatedFrame> out(jobs.size());
    std::vector<std::optional<Error>> errors(jobs.size());
    const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = annotate_frame(jobs[i].frame->frame, jobs[i].frame->detections, *jobs[i].meta);
        } catch (const Error& e) {
            errors[i] = e;
        }
    }
    rethrow_first(errors);
    return out;
}

Rng item_rng(std::uint64_t seed, std::size_t item) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(item), static_cast<std::uint32_t>(std::uint64_t{item} >> 32)};
    return Rng(seq);
}

std::vector<PipelineResult> augment_batch_serial(const ClipPlan& base, std::span<const AugmentOp> ops,
                                                 const AugmentParams& params, std::uint64_t seed, std::size_t count) {
    std::vector<PipelineResult> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = item_rng(seed, i);
        try {
            out.push_back(apply_pipeline(base, ops, params, rng));
        } catch (const Error& e) {
            throw ItemError(i, e);
        }
    }
    return out;
}

std::vector<PipelineResult> augment_batch(const ClipPlan& base, std::span<const AugmentOp> ops,
                                          const AugmentParams& params, std::uint64_t seed, std::size_t count) {
    std::vector<PipelineResult> out(count);
    std::vector<std::optional<Error>> errors(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        Rng rng = item_rng(seed, static_cast<std::size_t>(i));
        try {
            out[i] = apply_pipeline(base, ops, params, rng);
        } catch (const Error& e) {
            errors[i] = e;
        }
    }
    rethrow_first(errors);
    return out;
}

namespace {
ClipPlan identity_plan(std::size_t len) {
    return sample_window(static_cast<std::int64_t>(len), len, 1, 0);
}
}  // namespace

std::vector<std::uint64_t> drop_selection_counts_serial(std::size_t len, double drop_ratio, std::uint64_t seed,
                                                        std::size_t trials) {
    const ClipPlan plan = identity_plan(len);
    std::vector<std::uint64_t> counts(drop_extended_length(len, drop_ratio), 0);
    std::vector<std::size_t> chosen;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = item_rng(seed, t);
        random_drop(plan, drop_ratio, rng, &chosen);
        for (std::size_t p : chosen) ++counts[p];
    }
    return counts;
}

std::vector<std::uint64_t> drop_selection_counts(std::size_t len, double drop_ratio, std::uint64_t seed,
                                                 std::size_t trials) {
    const ClipPlan plan = identity_plan(len);
    const std::size_t ext = drop_extended_length(len, drop_ratio);
    std::vector<std::uint64_t> counts(ext, 0);
    const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(ext, 0);
        std::vector<std::size_t> chosen;
#pragma omp for schedule(static)
        for (std::ptrdiff_t t = 0; t < n; ++t) {
            Rng rng = item_rng(seed, static_cast<std::size_t>(t));
            random_drop(plan, drop_ratio, rng, &chosen);
            for (std::size_t p : chosen) ++local[p];
        }
#pragma omp critical
        for (std::size_t i = 0; i < ext; ++i) counts[i] += local[i];
    }
    return counts;
}

}  // namespace gtk::kernels
