#include "gtk/clipaug.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <numeric>

#include "gtk/error.hpp"

namespace gtk {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(Errc::InvalidArgument, what);
}

ClipPlan with_indices(const ClipPlan& base, std::vector<std::int64_t> indices) {
    ClipPlan out = base;
    out.indices = std::move(indices);
    out.sign = remap_boundary(out.source_sign, out.indices);
    return out;
}

}  // namespace

bool ClipPlan::satisfies_invariants() const noexcept {
    if (indices.empty() || video_len < 1) return false;
    if (!std::is_sorted(indices.begin(), indices.end())) return false;
    if (indices.front() < 0 || indices.back() >= video_len) return false;
    return sign.valid_within(static_cast<std::int64_t>(indices.size()));
}

void AugmentParams::validate() const {
    require(speed_factor >= 2, "speed factor must be >= 2");
    require(slow_factor >= 2, "slow factor must be >= 2");
    require(drop_ratio > 0.0 && drop_ratio < 1.0, "drop_ratio must lie in (0,1)");
    require(add_ratio > 0.0 && add_ratio < 1.0, "add_ratio must lie in (0,1)");
    require(shift.lo <= shift.hi, "shift interval needs lo <= hi");
    for (double p : {p_drop, p_add, p_speed, p_slow}) require(p >= 0.0 && std::isfinite(p), "probabilities must be >= 0");
    require(p_drop + p_add + p_speed + p_slow > 0.0, "at least one speed modification needs a positive probability");
}

ClipPlan sample_window(std::int64_t video_len, std::size_t size, std::int64_t step, std::int64_t start,
                       SignBoundary source_sign) {
    require(video_len >= 1, "video length must be >= 1");
    require(size >= 1, "clip size must be >= 1");
    require(step >= 1, "sampling step must be >= 1");
    require(start >= 0, "start must be >= 0");
    require(source_sign.valid_within(video_len), "sign must lie inside the video");

    std::vector<std::int64_t> idx(size);
    for (std::size_t i = 0; i < size; ++i)
        idx[i] = std::min(start + static_cast<std::int64_t>(i) * step, video_len - 1);

    ClipPlan plan;
    plan.video_len = video_len;
    plan.step = step;
    plan.source_sign = source_sign;
    return with_indices(plan, std::move(idx));
}

ClipPlan extend_right(const ClipPlan& plan, std::size_t new_len) {
    std::vector<std::int64_t> idx = plan.indices;
    idx.reserve(std::max(new_len, idx.size()));
    const std::int64_t last_frame = plan.video_len - 1;
    std::int64_t next = idx.empty() ? 0 : idx.back();
    while (idx.size() < new_len) {
        next = std::min(next + plan.step, last_frame);
        idx.push_back(next);
    }
    return with_indices(plan, std::move(idx));
}

SignBoundary remap_boundary(const SignBoundary& sign, std::span<const std::int64_t> indices) {
    if (sign.no_event) return SignBoundary::none();
    std::int64_t first = -1;
    std::int64_t last = -1;
    for (std::size_t p = 0; p < indices.size(); ++p) {
        if (first < 0 && indices[p] >= sign.start) first = static_cast<std::int64_t>(p);
        if (indices[p] <= sign.end) last = static_cast<std::int64_t>(p);
    }
    if (first < 0 || last < 0 || first > last) return SignBoundary::none();
    return {first, last, false};
}

ClipPlan speed_up(const ClipPlan& plan, std::int64_t factor) {
    require(factor >= 2, "speed-up factor must be >= 2");
    const std::size_t len = plan.length();
    const ClipPlan extended = extend_right(plan, len * static_cast<std::size_t>(factor));
    std::vector<std::int64_t> idx;
    idx.reserve(len);
    for (std::size_t i = 0; i < len; ++i) idx.push_back(extended.indices[i * static_cast<std::size_t>(factor)]);
    return with_indices(plan, std::move(idx));
}

ClipPlan slow_down(const ClipPlan& plan, std::int64_t factor) {
    require(factor >= 2, "slow-down factor must be >= 2");
    const std::size_t len = plan.length();
    std::vector<std::int64_t> idx;
    idx.reserve(len);
    for (std::size_t i = 0; idx.size() < len; ++i)
        for (std::int64_t r = 0; r < factor && idx.size() < len; ++r) idx.push_back(plan.indices[i]);
    return with_indices(plan, std::move(idx));
}

std::size_t drop_extended_length(std::size_t len, double drop_ratio) {
    require(drop_ratio >= 0.0 && drop_ratio < 1.0, "drop_ratio must lie in [0,1)");
    return static_cast<std::size_t>(std::floor(static_cast<double>(len) / (1.0 - drop_ratio) + 0.5));
}

ClipPlan random_drop(const ClipPlan& plan, double drop_ratio, Rng& rng) {
    return random_drop(plan, drop_ratio, rng, nullptr);
}

ClipPlan random_drop(const ClipPlan& plan, double drop_ratio, Rng& rng, std::vector<std::size_t>* chosen) {
    const std::size_t len = plan.length();
    const ClipPlan extended = extend_right(plan, drop_extended_length(len, drop_ratio));

    std::vector<std::size_t> positions(extended.length());
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    std::vector<std::size_t> picked;
    picked.reserve(len);
    std::sample(positions.begin(), positions.end(), std::back_inserter(picked), len, rng);
    std::sort(picked.begin(), picked.end());

    std::vector<std::int64_t> idx;
    idx.reserve(len);
    for (std::size_t p : picked) idx.push_back(extended.indices[p]);
    if (chosen) *chosen = std::move(picked);
    return with_indices(plan, std::move(idx));
}

ClipPlan random_add(const ClipPlan& plan, double add_ratio, Rng& rng) {
    require(add_ratio >= 0.0 && add_ratio < 1.0, "add_ratio must lie in [0,1)");
    const std::size_t len = plan.length();
    // 1e-9 keeps exact products such as 0.3 * 10 from rounding up to 4.
    const auto count = static_cast<std::size_t>(std::ceil(add_ratio * static_cast<double>(len) - 1e-9));
    if (count == 0) return plan;

    std::vector<std::size_t> positions(len);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    std::vector<bool> dup(len, false);
    std::vector<std::size_t> picked;
    std::sample(positions.begin(), positions.end(), std::back_inserter(picked), count, rng);
    for (std::size_t p : picked) dup[p] = true;

    std::vector<std::int64_t> idx;
    idx.reserve(len + count);
    for (std::size_t i = 0; i < len && idx.size() < len; ++i) {
        idx.push_back(plan.indices[i]);
        if (dup[i]) idx.push_back(plan.indices[i]);
    }
    idx.resize(len);
    return with_indices(plan, std::move(idx));
}

SignBoundary shift_boundary(const SignBoundary& sign, std::int64_t left, std::int64_t right, std::int64_t clip_len) {
    if (sign.no_event) return sign;
    const std::int64_t s = std::clamp(sign.start - left, std::int64_t{0}, clip_len - 1);
    const std::int64_t e = std::clamp(sign.end + right, std::int64_t{0}, clip_len - 1);
    if (s > e) return sign;
    return {s, e, false};
}

SignBoundary boundary_shift(const SignBoundary& sign, ShiftInterval interval, std::int64_t clip_len, Rng& rng) {
    require(interval.lo <= interval.hi, "shift interval needs lo <= hi");
    require(clip_len >= 1, "clip length must be >= 1");
    require(sign.valid_within(clip_len), "sign must lie inside the clip");
    if (sign.no_event) return sign;

    std::uniform_int_distribution<std::int64_t> draw(interval.lo, interval.hi);
    for (int attempt = 0; attempt < 8; ++attempt) {
        const std::int64_t left = draw(rng);
        const std::int64_t right = draw(rng);
        const std::int64_t s = std::clamp(sign.start - left, std::int64_t{0}, clip_len - 1);
        const std::int64_t e = std::clamp(sign.end + right, std::int64_t{0}, clip_len - 1);
        if (s <= e) return {s, e, false};
    }
    return sign;
}

ClipPlan shift_plan(const ClipPlan& plan, ShiftInterval interval, Rng& rng) {
    ClipPlan out = plan;
    out.source_sign = boundary_shift(plan.source_sign, interval, plan.video_len, rng);
    out.sign = remap_boundary(out.source_sign, out.indices);
    return out;
}

// --- pipelines ---

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = text.find(sep, pos);
        out.push_back(text.substr(pos, next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

std::int64_t parse_int(std::string_view s, std::string_view op) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw Error(Errc::InvalidArgument, "bad integer '" + std::string(s) + "' in op '" + std::string(op) + "'");
    return v;
}

double parse_double(std::string_view s, std::string_view op) {
    try {
        std::size_t used = 0;
        const std::string str(s);
        const double v = std::stod(str, &used);
        if (used == str.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw Error(Errc::InvalidArgument, "bad number '" + std::string(s) + "' in op '" + std::string(op) + "'");
}

}  // namespace

std::vector<AugmentOp> parse_pipeline(std::string_view text, const AugmentParams& params) {
    std::vector<AugmentOp> ops;
    require(!text.empty(), "empty augmentation pipeline");
    for (std::string_view item : split(text, ',')) {
        const auto parts = split(item, ':');
        const std::string_view name = parts[0];
        const std::size_t nargs = parts.size() - 1;
        auto arity = [&](std::size_t lo, std::size_t hi) {
            if (nargs < lo || nargs > hi)
                throw Error(Errc::InvalidArgument, "wrong number of arguments for op '" + std::string(item) + "'");
        };
        if (name == "none") {
            arity(0, 0);
            ops.emplace_back(IdentityOp{});
        } else if (name == "speedup") {
            arity(0, 1);
            const auto f = nargs ? parse_int(parts[1], item) : params.speed_factor;
            require(f >= 2, "speedup factor must be >= 2");
            ops.emplace_back(SpeedUpOp{f});
        } else if (name == "slowdown") {
            arity(0, 1);
            const auto f = nargs ? parse_int(parts[1], item) : params.slow_factor;
            require(f >= 2, "slowdown factor must be >= 2");
            ops.emplace_back(SlowDownOp{f});
        } else if (name == "drop") {
            arity(0, 1);
            const double r = nargs ? parse_double(parts[1], item) : params.drop_ratio;
            require(r > 0.0 && r < 1.0, "drop ratio must lie in (0,1)");
            ops.emplace_back(DropOp{r});
        } else if (name == "add") {
            arity(0, 1);
            const double r = nargs ? parse_double(parts[1], item) : params.add_ratio;
            require(r >= 0.0 && r < 1.0, "add ratio must lie in [0,1)");
            ops.emplace_back(AddOp{r});
        } else if (name == "shift") {
            if (nargs != 0 && nargs != 2)
                throw Error(Errc::InvalidArgument, "shift takes zero or two arguments (shift:lo:hi)");
            ShiftInterval iv = params.shift;
            if (nargs) iv = {parse_int(parts[1], item), parse_int(parts[2], item)};
            require(iv.lo <= iv.hi, "shift interval needs lo <= hi");
            ops.emplace_back(ShiftOp{iv});
        } else if (name == "random") {
            arity(0, 0);
            ops.emplace_back(RandomOp{});
        } else {
            throw Error(Errc::InvalidArgument, "unknown augmentation op '" + std::string(name) + "'");
        }
    }
    return ops;
}

namespace {
std::string fmt_ratio(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}
}  // namespace

std::string describe(const AugmentOp& op) {
    struct Visitor {
        std::string operator()(const SpeedUpOp& o) const { return "speedup:" + std::to_string(o.factor); }
        std::string operator()(const SlowDownOp& o) const { return "slowdown:" + std::to_string(o.factor); }
        std::string operator()(const DropOp& o) const { return "drop:" + fmt_ratio(o.ratio); }
        std::string operator()(const AddOp& o) const { return "add:" + fmt_ratio(o.ratio); }
        std::string operator()(const ShiftOp& o) const {
            return "shift:" + std::to_string(o.interval.lo) + ":" + std::to_string(o.interval.hi);
        }
        std::string operator()(const RandomOp&) const { return "random"; }
        std::string operator()(const IdentityOp&) const { return "none"; }
    };
    return std::visit(Visitor{}, op);
}

PipelineResult apply_pipeline(const ClipPlan& plan, std::span<const AugmentOp> ops, const AugmentParams& params,
                              Rng& rng) {
    PipelineResult res{plan, {}};
    auto apply_one = [&](const AugmentOp& op, auto& self) -> void {
        if (std::holds_alternative<RandomOp>(op)) {
            std::discrete_distribution<int> pick({params.p_speed, params.p_slow, params.p_add, params.p_drop});
            const AugmentOp chosen = [&]() -> AugmentOp {
                switch (pick(rng)) {
                    case 0: return SpeedUpOp{params.speed_factor};
                    case 1: return SlowDownOp{params.slow_factor};
                    case 2: return AddOp{params.add_ratio};
                    default: return DropOp{params.drop_ratio};
                }
            }();
            self(chosen, self);
            self(AugmentOp{ShiftOp{params.shift}}, self);
            return;
        }
        std::visit(
            [&](const auto& o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, SpeedUpOp>)
                    res.plan = speed_up(res.plan, o.factor);
                else if constexpr (std::is_same_v<T, SlowDownOp>)
                    res.plan = slow_down(res.plan, o.factor);
                else if constexpr (std::is_same_v<T, DropOp>)
                    res.plan = random_drop(res.plan, o.ratio, rng);
                else if constexpr (std::is_same_v<T, AddOp>)
                    res.plan = random_add(res.plan, o.ratio, rng);
                else if constexpr (std::is_same_v<T, ShiftOp>)
                    res.plan = shift_plan(res.plan, o.interval, rng);
            },
            op);
        res.applied.push_back(describe(op));
    };
    for (const auto& op : ops) apply_one(op, apply_one);
    return res;
}

}  // namespace gtk
