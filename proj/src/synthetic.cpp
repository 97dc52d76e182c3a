#include "gtk/synthetic.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "gtk/error.hpp"

namespace gtk {

namespace {

constexpr std::int64_t kLeadIn = 5;
constexpr std::int64_t kTrail = 40;
constexpr double kHand = 0.12;
constexpr double kPairHand = 0.10;
constexpr double kScore = 0.9;

class TraceBuilder {
public:
    TraceBuilder(double sigma, std::uint64_t seed) : sigma_(sigma), rng_(seed) {
        for (std::int64_t i = 0; i < kLeadIn; ++i) empty();
    }

    void empty() { frames_.push_back({next_++, std::nullopt, {}}); }

    struct Hand {
        std::string label;
        Point c;
        double size = kHand;
    };

    void hands(std::initializer_list<Hand> hs) {
        FrameDetections f{next_++, std::nullopt, {}};
        for (const auto& h : hs) f.detections.push_back({h.label, kScore, box_at(h.c, h.size)});
        frames_.push_back(std::move(f));
    }

    std::vector<FrameDetections> take() { return std::move(frames_); }

private:
    BBox box_at(Point c, double size) {
        if (sigma_ > 0.0) {
            std::normal_distribution<double> n(0.0, sigma_);
            c.x += n(rng_);
            c.y += n(rng_);
        }
        const double h = size / 2.0;
        c.x = std::clamp(c.x, h, 1.0 - h);
        c.y = std::clamp(c.y, h, 1.0 - h);
        return {c.x - h, c.y - h, c.x + h, c.y + h};
    }

    double sigma_;
    std::mt19937_64 rng_;
    std::int64_t next_ = 0;
    std::vector<FrameDetections> frames_;
};

double lerp(double a, double b, std::int64_t i, std::int64_t n) {
    return a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
}

void swipe(TraceBuilder& tb, Point from, Point to) {
    constexpr std::int64_t n = 21;
    for (std::int64_t i = 0; i < n; ++i)
        tb.hands({{"point", {lerp(from.x, to.x, i, n), lerp(from.y, to.y, i, n)}}});
}

void zoom(TraceBuilder& tb, double d_from, double d_to) {
    constexpr std::int64_t n = 25;
    for (std::int64_t i = 0; i < n; ++i) {
        const double d = lerp(d_from, d_to, i, n);
        tb.hands({{"thumb_index2", {0.5 - d / 2.0, 0.5}, kPairHand}, {"thumb_index2", {0.5 + d / 2.0, 0.5}, kPairHand}});
    }
}

void repeat(TraceBuilder& tb, std::string_view label, Point c, std::int64_t n) {
    for (std::int64_t i = 0; i < n; ++i) tb.hands({{std::string(label), c}});
}

void trail(TraceBuilder& tb) {
    for (std::int64_t i = 0; i < kTrail; ++i) tb.empty();
}

}  // namespace

std::optional<EventKind> trace_kind_from_string(std::string_view name) {
    if (name == "none") return std::nullopt;
    if (auto k = event_kind_from_string(name)) return k;
    throw Error(Errc::UnknownKind, "unknown gesture kind '" + std::string(name) + "'");
}

std::vector<FrameDetections> generate_trace(std::optional<EventKind> kind, double noise_sigma, std::uint64_t seed) {
    if (!(noise_sigma >= 0.0)) throw Error(Errc::InvalidArgument, "noise sigma must be >= 0");
    TraceBuilder tb(noise_sigma, seed);
    const Point mid{0.5, 0.5};

    if (!kind) {
        repeat(tb, kNoGesture, {0.4, 0.6}, 1000 - kLeadIn);
        return tb.take();
    }
    switch (*kind) {
        case EventKind::SwipeRight: swipe(tb, {0.25, 0.5}, {0.75, 0.5}); break;
        case EventKind::SwipeLeft: swipe(tb, {0.75, 0.5}, {0.25, 0.5}); break;
        case EventKind::SwipeDown: swipe(tb, {0.5, 0.25}, {0.5, 0.75}); break;
        case EventKind::SwipeUp: swipe(tb, {0.5, 0.75}, {0.5, 0.25}); break;
        case EventKind::ZoomOut: zoom(tb, 0.5, 0.2); break;
        case EventKind::ZoomIn: zoom(tb, 0.2, 0.5); break;
        case EventKind::Drag: {
            repeat(tb, "grabbing", {0.3, 0.5}, 6);
            constexpr std::int64_t n = 24;
            for (std::int64_t i = 0; i < n; ++i) tb.hands({{"grip", {lerp(0.3, 0.6, i, n), 0.5}}});
            return tb.take();
        }
        case EventKind::Drop:
            repeat(tb, "grabbing", mid, 6);
            repeat(tb, "grip", mid, 4);
            repeat(tb, "grabbing", mid, 10);
            break;
        case EventKind::Click: repeat(tb, "point", mid, 30); break;
        case EventKind::DoubleClick:
            repeat(tb, "point", mid, 14);
            repeat(tb, kNoGesture, mid, 8);
            repeat(tb, "point", mid, 14);
            break;
    }
    trail(tb);
    return tb.take();
}

}  // namespace gtk
