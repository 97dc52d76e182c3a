#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "gtk/annotate.hpp"
#include "gtk/clipaug.hpp"
#include "gtk/detection.hpp"
#include "gtk/dynamics.hpp"

namespace gtk {

inline constexpr std::size_t kMaxLineBytes = 64 * 1024;

/// Rounds to 6 significant digits so that serialized floats stay short.
double round6(double v) noexcept;

/// Strict parse of one FrameDetections line:
///   {"frame": int, "ts_ms": int (optional), "detections": [{"label": str, "score": [0,1], "box": [x1,y1,x2,y2]}]}
/// Unknown fields are rejected. Throws Errc::MalformedJson or Errc::SchemaViolation.
FrameDetections parse_frame(std::string_view line);

/// parse_frame plus the per-session frame ordering check (Errc::NonMonotonicFrame).
class FrameReader {
public:
    FrameDetections parse(std::string_view line);

private:
    std::optional<std::int64_t> last_;
};

std::string frame_to_json(const FrameDetections& frame);

/// {"kind":...,"tracks":[...],"start":...,"end":...,"params":{...},"action":...}
std::string event_to_json(const GestureEvent& event);

/// {"frame":...,"labels":[...],"bboxes":[[x1,y1,x2,y2],...]}
std::string annotation_to_json(const AnnotatedFrame& frame);

/// {"indices":[...],"sign":[s,e] or null,"meta":{"ops":[...],"seed":...}}
std::string clip_plan_to_json(const ClipPlan& plan, const std::vector<std::string>& ops, std::uint64_t seed);

std::string error_to_json(std::string_view code, std::string_view detail);

/// Shared settings of every session served by one process.
struct EngineSettings {
    RecognizerConfig recognizer{};
    TrackerParams tracker{};
    ActionMap actions = default_action_map();
};

/// Line protocol of one connection: each request line yields the event lines of
/// that frame followed by {"ack": frame}. Malformed JSON and out-of-order
/// frames answer with an error line and end the session; schema violations
/// answer with an error line and the session continues.
class Session {
public:
    explicit Session(const EngineSettings& settings);

    struct Reply {
        std::vector<std::string> lines;
        bool close = false;
    };

    Reply on_line(std::string_view line);
    /// Reply to a request line that exceeded kMaxLineBytes.
    Reply on_oversized_line();

private:
    FrameReader reader_;
    Engine engine_;
};

/// Parses a "host:port" address.
std::pair<std::string, std::uint16_t> parse_bind_addr(std::string_view addr);

/// GTK_BIND_ADDR or 127.0.0.1:7878.
std::string default_bind_addr();

/// TCP server with one thread and one independent Session per connection.
class Server {
public:
    Server(EngineSettings settings, std::string addr);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Binds and listens; returns the bound port (useful with port 0).
    std::uint16_t listen();
    /// Accept loop; returns after stop().
    void run();
    void stop();

    std::uint16_t port() const noexcept { return port_; }

private:
    void handle(int fd);

    EngineSettings settings_;
    std::string addr_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::mutex mu_;
    std::vector<std::thread> workers_;
    std::vector<int> open_fds_;
};

}  // namespace gtk
