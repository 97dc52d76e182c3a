#include "gtk/tracking.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gtk/error.hpp"
#include "oracles.hpp"

namespace gtk {
namespace {

FrameDetections frame_of(std::int64_t f, std::vector<BBox> boxes, std::string label = "point") {
    FrameDetections fd{f, std::nullopt, {}};
    for (const auto& b : boxes) fd.detections.push_back({label, 0.9, b});
    return fd;
}

TEST(Tracker, SameBoxMatches) {
    Tracker t;
    const BBox b{0.1, 0.1, 0.3, 0.3};
    t.associate(frame_of(0, {b}));
    t.associate(frame_of(1, {}));
    ASSERT_EQ(t.tracks()[0].age_since_seen, 1);
    const auto r = t.associate(frame_of(2, {b}));
    ASSERT_EQ(r.assignments.size(), 1u);
    EXPECT_FALSE(r.assignments[0].spawned);
    EXPECT_EQ(r.assignments[0].track_id, 0);
    EXPECT_EQ(t.tracks()[0].age_since_seen, 0);
    EXPECT_EQ(t.tracks()[0].history.size(), 2u);
}

TEST(Tracker, SpawnsInInputOrder) {
    Tracker t;
    const auto r = t.associate(frame_of(0, {{0.1, 0.1, 0.2, 0.2}, {0.6, 0.6, 0.7, 0.7}}));
    ASSERT_EQ(r.assignments.size(), 2u);
    EXPECT_TRUE(r.assignments[0].spawned);
    EXPECT_EQ(r.assignments[0].track_id, 0);
    EXPECT_EQ(r.assignments[1].track_id, 1);
}

TEST(Tracker, DirectPairingMatchesEnumeratedOptimum) {
    Tracker t;
    const BBox a{0.0, 0.0, 0.2, 0.2}, b{0.6, 0.6, 0.8, 0.8};
    t.associate(frame_of(0, {a, b}));
    // Detections listed in reverse so input order alone cannot explain the result.
    const BBox db{0.6, 0.6, 0.8, 0.75}, da{0.0, 0.0, 0.2, 0.18};
    const auto r = t.associate(frame_of(1, {db, da}));
    std::vector<std::vector<double>> m{{iou2d(a, db), iou2d(a, da)}, {iou2d(b, db), iou2d(b, da)}};
    std::vector<int> best;
    oracle::best_assignment_total(m, 0.3, &best);
    EXPECT_EQ(best, (std::vector<int>{1, 0}));
    EXPECT_EQ(r.assignments[0].track_id, 1);
    EXPECT_EQ(r.assignments[1].track_id, 0);
}

TEST(Tracker, GateBlocksWeakMatches) {
    Tracker t;
    t.associate(frame_of(0, {{0.0, 0.0, 0.2, 0.2}}));
    const auto r = t.associate(frame_of(1, {{0.15, 0.15, 0.35, 0.35}}));
    EXPECT_TRUE(r.assignments[0].spawned);
    EXPECT_EQ(r.assignments[0].track_id, 1);
}

TEST(Tracker, RetiresAfterMaxAge) {
    Tracker t({0.3, 2, 64});
    t.associate(frame_of(0, {{0.1, 0.1, 0.2, 0.2}}));
    EXPECT_TRUE(t.associate(frame_of(1, {})).retired.empty());
    EXPECT_TRUE(t.associate(frame_of(2, {})).retired.empty());
    const auto r = t.associate(frame_of(3, {}));
    ASSERT_EQ(r.retired.size(), 1u);
    EXPECT_EQ(r.retired[0].id, 0);
    EXPECT_TRUE(t.tracks().empty());
    const auto again = t.associate(frame_of(4, {{0.1, 0.1, 0.2, 0.2}}));
    EXPECT_EQ(again.assignments[0].track_id, 1);
}

TEST(Tracker, NonMonotonicFrame) {
    Tracker t;
    t.associate(frame_of(5, {}));
    for (std::int64_t f : {5, 4}) {
        try {
            t.associate(frame_of(f, {}));
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::NonMonotonicFrame);
        }
    }
}

TEST(Tracker, LabelChangeKeepsIdentity) {
    Tracker t;
    const BBox b{0.3, 0.3, 0.5, 0.5};
    t.associate(frame_of(0, {b}, "grabbing"));
    const auto r = t.associate(frame_of(1, {b}, "grip"));
    EXPECT_FALSE(r.assignments[0].spawned);
    EXPECT_EQ(t.tracks()[0].label(), "grip");
}

TEST(Tracker, HistoryIsBounded) {
    Tracker t({0.3, 15, 8});
    for (int f = 0; f < 20; ++f) t.associate(frame_of(f, {{0.3, 0.3, 0.5, 0.5}}));
    ASSERT_EQ(t.tracks()[0].history.size(), 8u);
    EXPECT_EQ(t.tracks()[0].history.front().frame, 12);
}

TEST(Tracker, StationaryDetectionsKeepTrackCount) {
    Tracker t({0.99, 15, 64});
    const std::vector<BBox> boxes{{0.1, 0.1, 0.2, 0.2}, {0.5, 0.1, 0.6, 0.2}, {0.1, 0.6, 0.3, 0.8}};
    for (int f = 0; f < 100; ++f) {
        t.associate(frame_of(f, boxes));
        ASSERT_EQ(t.tracks().size(), 3u);
    }
}

TEST(Tracker, RandomFramesAssignOneToOne) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 0.8), j(-0.03, 0.03);
    Tracker t;
    std::set<std::int64_t> seen_ids;
    std::int64_t max_id = -1;
    std::vector<BBox> boxes;
    for (int k = 0; k < 3; ++k) {
        const double x = u(rng), y = u(rng);
        boxes.push_back({x, y, x + 0.15, y + 0.15});
    }
    for (int f = 0; f < 300; ++f) {
        std::vector<BBox> cur;
        for (const auto& b : boxes) {
            if (rng() % 5 == 0) continue;
            const double dx = j(rng), dy = j(rng);
            cur.push_back(clamp_unit({b.x1 + dx, b.y1 + dy, b.x2 + dx, b.y2 + dy}));
        }
        const auto r = t.associate(frame_of(f, cur));
        ASSERT_EQ(r.assignments.size(), cur.size());
        std::set<std::int64_t> ids;
        for (const auto& a : r.assignments) {
            EXPECT_TRUE(ids.insert(a.track_id).second);
            if (a.spawned) {
                EXPECT_GT(a.track_id, max_id);
                EXPECT_TRUE(seen_ids.insert(a.track_id).second);
                max_id = a.track_id;
            }
        }
    }
}

TEST(TrackerParams, Validation) {
    EXPECT_THROW((TrackerParams{1.5, 15, 64}.validate()), Error);
    EXPECT_THROW((TrackerParams{0.3, -1, 64}.validate()), Error);
    EXPECT_THROW((TrackerParams{0.3, 15, 0}.validate()), Error);
    EXPECT_NO_THROW(TrackerParams{}.validate());
}

}  // namespace
}  // namespace gtk
