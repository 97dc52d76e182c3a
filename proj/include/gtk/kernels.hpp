#pragma once

// Batch kernels. Each has an OpenMP version and a serial reference with the same
// contract; tests check that both produce identical output, and bench/ compares
// their throughput.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gtk/annotate.hpp"
#include "gtk/clipaug.hpp"
#include "gtk/error.hpp"
#include "gtk/scoring.hpp"

namespace gtk::kernels {

/// Error raised by one item of a batch; `index` is the item position. When
/// several items fail, the lowest index is reported.
class ItemError : public Error {
public:
    ItemError(std::size_t index, const Error& cause) : Error(cause), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Sliding windows [k*stride, k*stride + size - 1] with k*stride + size <= video_len.
/// A video shorter than one window yields the single window [0, size - 1].
std::vector<Window> sliding_windows(std::int64_t video_len, std::int64_t size, std::int64_t stride);

std::vector<ScoredWindow> score_windows(std::int64_t video_len, const SignBoundary& sign, std::int64_t size,
                                        std::int64_t stride, IouMode mode);
std::vector<ScoredWindow> score_windows_serial(std::int64_t video_len, const SignBoundary& sign, std::int64_t size,
                                               std::int64_t stride, IouMode mode);

struct AnnotationJob {
    const FrameDetections* frame = nullptr;
    const GestureClassMeta* meta = nullptr;
};

std::vector<AnnotatedFrame> annotate_batch(std::span<const AnnotationJob> jobs);
std::vector<AnnotatedFrame> annotate_batch_serial(std::span<const AnnotationJob> jobs);

/// Independent random stream for batch item `item`, a pure function of (seed, item).
Rng item_rng(std::uint64_t seed, std::size_t item);

/// `count` independent augmentations of `base`; item i uses item_rng(seed, i),
/// so results do not depend on the thread count.
std::vector<PipelineResult> augment_batch(const ClipPlan& base, std::span<const AugmentOp> ops,
                                          const AugmentParams& params, std::uint64_t seed, std::size_t count);
std::vector<PipelineResult> augment_batch_serial(const ClipPlan& base, std::span<const AugmentOp> ops,
                                                 const AugmentParams& params, std::uint64_t seed, std::size_t count);

/// How often each extended position is kept by random_drop over `trials`
/// independent draws.
std::vector<std::uint64_t> drop_selection_counts(std::size_t len, double drop_ratio, std::uint64_t seed,
                                                 std::size_t trials);
std::vector<std::uint64_t> drop_selection_counts_serial(std::size_t len, double drop_ratio, std::uint64_t seed,
                                                        std::size_t trials);

}  // namespace gtk::kernels
