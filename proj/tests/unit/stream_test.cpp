#include "gtk/stream.hpp"

#include <gtest/gtest.h>

#include <future>
#include <thread>

#include "gtk/error.hpp"
#include "gtk/synthetic.hpp"
#include "json.hpp"
#include "line_client.hpp"

namespace gtk {
namespace {

using testing_support::LineClient;

Errc parse_error(std::string_view line, std::string* path = nullptr) {
    try {
        parse_frame(line);
    } catch (const Error& e) {
        if (path) *path = e.path();
        return e.code();
    }
    ADD_FAILURE() << "accepted: " << line;
    return Errc::InvalidArgument;
}

TEST(ParseFrame, Examples) {
    const auto empty = parse_frame(R"({"frame":0,"detections":[]})");
    EXPECT_EQ(empty.frame, 0);
    EXPECT_TRUE(empty.detections.empty());

    const auto one = parse_frame(R"({"frame":1,"detections":[{"label":"point","score":0.97,"box":[0.1,0.1,0.2,0.3]}]})");
    ASSERT_EQ(one.detections.size(), 1u);
    EXPECT_EQ(one.detections[0].label, "point");
    EXPECT_DOUBLE_EQ(one.detections[0].score, 0.97);
    EXPECT_EQ(one.detections[0].box, (BBox{0.1, 0.1, 0.2, 0.3}));

    std::string path;
    EXPECT_EQ(parse_error(R"({"frame":0,"detections":[{"label":"point","score":0.9,"box":[0.5,0.1,0.2,0.3]}]})", &path),
              Errc::SchemaViolation);
    EXPECT_EQ(path, "detections[0].box");
}

TEST(ParseFrame, OptionalTimestamp) {
    EXPECT_EQ(parse_frame(R"({"frame":3,"ts_ms":120,"detections":[]})").ts_ms, 120);
}

TEST(ParseFrame, SchemaErrorsCarryPaths) {
    struct Case {
        const char* line;
        Errc code;
        const char* path;
    };
    const Case cases[] = {
        {R"({"frame":0})", Errc::SchemaViolation, "detections"},
        {R"({"frame":0.5,"detections":[]})", Errc::SchemaViolation, "frame"},
        {R"({"frame":0,"detections":[],"extra":1})", Errc::SchemaViolation, "extra"},
        {R"({"frame":0,"detections":{}})", Errc::SchemaViolation, "detections"},
        {R"({"frame":0,"detections":[{"label":"","score":0.5,"box":[0,0,1,1]}]})", Errc::SchemaViolation,
         "detections[0].label"},
        {R"({"frame":0,"detections":[{"label":"a","score":1.5,"box":[0,0,1,1]}]})", Errc::SchemaViolation,
         "detections[0].score"},
        {R"({"frame":0,"detections":[{"label":"a","score":0.5,"box":[0,0,1]}]})", Errc::SchemaViolation,
         "detections[0].box"},
        {R"({"frame":0,"detections":[{"label":"a","score":0.5,"box":[0,0,1,1],"id":3}]})", Errc::SchemaViolation,
         "detections[0].id"},
        {R"({"frame":0,"ts_ms":"now","detections":[]})", Errc::SchemaViolation, "ts_ms"},
        {R"([1,2])", Errc::SchemaViolation, "$"},
    };
    for (const auto& c : cases) {
        std::string path;
        EXPECT_EQ(parse_error(c.line, &path), c.code) << c.line;
        EXPECT_EQ(path, c.path) << c.line;
    }
}

TEST(ParseFrame, MalformedJson) {
    EXPECT_EQ(parse_error("{\"frame\":"), Errc::MalformedJson);
    EXPECT_EQ(parse_error("not json"), Errc::MalformedJson);
    EXPECT_EQ(parse_error(std::string(kMaxLineBytes + 1, ' ')), Errc::MalformedJson);
}

TEST(FrameReader, RejectsNonMonotonicFrames) {
    FrameReader r;
    r.parse(R"({"frame":4,"detections":[]})");
    try {
        r.parse(R"({"frame":4,"detections":[]})");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NonMonotonicFrame);
    }
}

TEST(Serialize, FrameRoundTrip) {
    for (auto kind : kAllEventKinds)
        for (const auto& f : generate_trace(kind, 0.01, 3)) {
            const auto back = parse_frame(frame_to_json(f));
            ASSERT_EQ(back.frame, f.frame);
            ASSERT_EQ(back.detections.size(), f.detections.size());
            for (std::size_t i = 0; i < f.detections.size(); ++i) {
                EXPECT_EQ(back.detections[i].label, f.detections[i].label);
                EXPECT_NEAR(back.detections[i].box.x1, f.detections[i].box.x1, 1e-6);
            }
        }
}

TEST(Serialize, EventFieldOrder) {
    GestureEvent ev{EventKind::SwipeLeft, {0}, 120, 141, SwipeParams{-0.512345678, 0.0}, "swipe left"};
    EXPECT_EQ(event_to_json(ev),
              R"({"kind":"swipe_left","tracks":[0],"start":120,"end":141,"params":{"dx":-0.512346,"dy":0.0},"action":"swipe left"})");
    ev = {EventKind::ZoomOut, {0, 1}, 5, 29, ZoomParams{0.4, 0.5, 0.2}, "zoom out content"};
    EXPECT_EQ(event_to_json(ev),
              R"({"kind":"zoom_out","tracks":[0,1],"start":5,"end":29,"params":{"ratio":0.4,"d_start":0.5,"d_end":0.2},"action":"zoom out content"})");
    ev = {EventKind::Click, {2}, 5, 16, PointParams{{0.5, 0.25}}, "click"};
    EXPECT_EQ(event_to_json(ev),
              R"({"kind":"click","tracks":[2],"start":5,"end":16,"params":{"point":[0.5,0.25]},"action":"click"})");
}

TEST(Serialize, RoundsToSixDigits) {
    EXPECT_EQ(round6(0.123456789), 0.123457);
    EXPECT_EQ(round6(1234567.0), 1234570.0);
    EXPECT_EQ(round6(0.0), 0.0);
}

TEST(Serialize, AnnotationAndPlan) {
    const AnnotatedFrame f{7, {{{0.1, 0.2, 0.3, 0.4}, "like"}, {{0.5, 0.5, 0.6, 0.6}, "no_gesture"}}};
    EXPECT_EQ(annotation_to_json(f),
              R"({"frame":7,"labels":["like","no_gesture"],"bboxes":[[0.1,0.2,0.3,0.4],[0.5,0.5,0.6,0.6]]})");
    ClipPlan p;
    p.indices = {0, 2, 4};
    p.sign = {1, 2};
    EXPECT_EQ(clip_plan_to_json(p, {"none"}, 9), R"({"indices":[0,2,4],"sign":[1,2],"meta":{"ops":["none"],"seed":9}})");
    p.sign = SignBoundary::none();
    EXPECT_EQ(clip_plan_to_json(p, {}, 0), R"({"indices":[0,2,4],"sign":null,"meta":{"ops":[],"seed":0}})");
}

TEST(Session, AcksEveryFrame) {
    Session s{EngineSettings{}};
    const auto r = s.on_line(R"({"frame":0,"detections":[]})");
    EXPECT_EQ(r.lines, (std::vector<std::string>{R"({"ack":0})"}));
    EXPECT_FALSE(r.close);
}

TEST(Session, SchemaErrorKeepsSessionOpen) {
    Session s{EngineSettings{}};
    const auto bad = s.on_line(R"({"frame":0,"detections":[],"x":1})");
    ASSERT_EQ(bad.lines.size(), 1u);
    const auto j = nlohmann::json::parse(bad.lines[0]);
    EXPECT_EQ(j["error"], "schema_violation");
    EXPECT_FALSE(bad.close);
    EXPECT_FALSE(s.on_line(R"({"frame":0,"detections":[]})").close);
}

TEST(Session, FatalErrorsClose) {
    Session s{EngineSettings{}};
    auto r = s.on_line("{oops");
    EXPECT_TRUE(r.close);
    EXPECT_EQ(nlohmann::json::parse(r.lines[0])["error"], "malformed_json");
    Session t{EngineSettings{}};
    t.on_line(R"({"frame":3,"detections":[]})");
    r = t.on_line(R"({"frame":2,"detections":[]})");
    EXPECT_TRUE(r.close);
    EXPECT_EQ(nlohmann::json::parse(r.lines[0])["error"], "non_monotonic_frame");
    EXPECT_TRUE(t.on_oversized_line().close);
}

TEST(BindAddr, Parse) {
    EXPECT_EQ(parse_bind_addr("127.0.0.1:7878"), (std::pair<std::string, std::uint16_t>{"127.0.0.1", 7878}));
    EXPECT_EQ(parse_bind_addr("localhost:0").second, 0);
    EXPECT_THROW(parse_bind_addr("7878"), Error);
    EXPECT_THROW(parse_bind_addr("host:99999"), Error);
    EXPECT_THROW(parse_bind_addr("host:x"), Error);
}

class ServerTest : public ::testing::Test {
protected:
    void SetUp() override {
        server_ = std::make_unique<Server>(EngineSettings{}, "127.0.0.1:0");
        port_ = server_->listen();
        runner_ = std::thread([this] { server_->run(); });
    }
    void TearDown() override {
        server_->stop();
        runner_.join();
    }

    std::unique_ptr<Server> server_;
    std::uint16_t port_ = 0;
    std::thread runner_;
};

std::string offline_events(const std::vector<FrameDetections>& frames) {
    Engine e;
    std::string out;
    for (const auto& f : frames)
        for (const auto& ev : e.process(f)) out += event_to_json(ev) + "\n";
    return out;
}

std::string stream_events(std::uint16_t port, const std::vector<FrameDetections>& frames) {
    LineClient c(port);
    std::string events;
    for (const auto& f : frames) {
        const auto ack = c.request(frame_to_json(f), &events);
        if (!ack || *ack != "{\"ack\":" + std::to_string(f.frame) + "}") return "<protocol error>";
    }
    return events;
}

TEST_F(ServerTest, MatchesOfflineOutput) {
    const auto frames = generate_trace(EventKind::ZoomOut);
    const auto expected = offline_events(frames);
    ASSERT_FALSE(expected.empty());
    EXPECT_EQ(stream_events(port_, frames), expected);
}

TEST_F(ServerTest, ConcurrentSessionsAreIsolated) {
    const auto a = generate_trace(EventKind::SwipeLeft);
    const auto b = generate_trace(EventKind::Drop);
    auto fa = std::async(std::launch::async, [&] { return stream_events(port_, a); });
    auto fb = std::async(std::launch::async, [&] { return stream_events(port_, b); });
    EXPECT_EQ(fa.get(), offline_events(a));
    EXPECT_EQ(fb.get(), offline_events(b));
}

TEST_F(ServerTest, MalformedLineClosesOnlyItsSession) {
    LineClient good(port_), bad(port_);
    std::string events;
    ASSERT_TRUE(good.request(R"({"frame":0,"detections":[]})", &events));
    ASSERT_TRUE(bad.send_line("{not json"));
    const auto err = bad.read_line();
    ASSERT_TRUE(err.has_value());
    EXPECT_EQ(nlohmann::json::parse(*err)["error"], "malformed_json");
    EXPECT_FALSE(bad.read_line().has_value());
    const auto ack = good.request(R"({"frame":1,"detections":[]})", &events);
    ASSERT_TRUE(ack.has_value());
    EXPECT_EQ(*ack, R"({"ack":1})");
}

TEST_F(ServerTest, OversizedLineIsRejected) {
    LineClient c(port_);
    ASSERT_TRUE(c.send_line(std::string(kMaxLineBytes + 10, 'x')));
    const auto err = c.read_line();
    ASSERT_TRUE(err.has_value());
    EXPECT_EQ(nlohmann::json::parse(*err)["error"], "malformed_json");
    EXPECT_FALSE(c.read_line().has_value());
}

TEST_F(ServerTest, BlankLinesAndCrlfAreTolerated) {
    LineClient c(port_);
    ASSERT_TRUE(c.send_raw("\r\n\n{\"frame\":0,\"detections\":[]}\r\n"));
    EXPECT_EQ(c.read_line(), std::optional<std::string>(R"({"ack":0})"));
}

}  // namespace
}  // namespace gtk
