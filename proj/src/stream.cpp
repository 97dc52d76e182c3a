#include "gtk/stream.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "gtk/error.hpp"
#include "json.hpp"

namespace gtk {

using ojson = nlohmann::ordered_json;

double round6(double v) noexcept {
    if (!std::isfinite(v)) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::strtod(buf, nullptr);
}

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& detail) {
    throw Error(Errc::SchemaViolation, detail, path);
}

void reject_unknown(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed, const std::string& path) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) schema(path.empty() ? key : path + "." + key, "unknown field");
    }
}

double number_at(const nlohmann::json& v, const std::string& path) {
    if (!v.is_number()) schema(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) schema(path, "expected a finite number");
    return d;
}

ojson point_json(const Point& p) { return ojson::array({round6(p.x), round6(p.y)}); }

}  // namespace

FrameDetections parse_frame(std::string_view line) {
    if (line.size() > kMaxLineBytes)
        throw Error(Errc::MalformedJson, "line exceeds " + std::to_string(kMaxLineBytes) + " bytes");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line.begin(), line.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::MalformedJson, e.what());
    }
    if (!j.is_object()) schema("$", "expected an object");
    reject_unknown(j, {"frame", "ts_ms", "detections"}, "");

    FrameDetections out;
    if (!j.contains("frame")) schema("frame", "missing field");
    if (!j["frame"].is_number_integer()) schema("frame", "expected an integer");
    out.frame = j["frame"].get<std::int64_t>();

    if (j.contains("ts_ms")) {
        if (!j["ts_ms"].is_number_integer()) schema("ts_ms", "expected an integer");
        out.ts_ms = j["ts_ms"].get<std::int64_t>();
    }

    if (!j.contains("detections")) schema("detections", "missing field");
    const auto& dets = j["detections"];
    if (!dets.is_array()) schema("detections", "expected an array");
    out.detections.reserve(dets.size());
    for (std::size_t i = 0; i < dets.size(); ++i) {
        const std::string base = "detections[" + std::to_string(i) + "]";
        const auto& d = dets[i];
        if (!d.is_object()) schema(base, "expected an object");
        reject_unknown(d, {"label", "score", "box"}, base);

        Detection det;
        if (!d.contains("label")) schema(base + ".label", "missing field");
        if (!d["label"].is_string() || d["label"].get<std::string>().empty())
            schema(base + ".label", "expected a non-empty string");
        det.label = d["label"].get<std::string>();

        if (!d.contains("score")) schema(base + ".score", "missing field");
        det.score = number_at(d["score"], base + ".score");
        if (det.score < 0.0 || det.score > 1.0) schema(base + ".score", "score must lie in [0,1]");

        if (!d.contains("box")) schema(base + ".box", "missing field");
        const auto& b = d["box"];
        if (!b.is_array() || b.size() != 4) schema(base + ".box", "expected [x1,y1,x2,y2]");
        det.box = {number_at(b[0], base + ".box[0]"), number_at(b[1], base + ".box[1]"),
                   number_at(b[2], base + ".box[2]"), number_at(b[3], base + ".box[3]")};
        if (!det.box.valid())
            schema(base + ".box", "box must satisfy 0 <= x1 <= x2 <= 1 and 0 <= y1 <= y2 <= 1");
        out.detections.push_back(std::move(det));
    }
    return out;
}

FrameDetections FrameReader::parse(std::string_view line) {
    FrameDetections f = parse_frame(line);
    if (last_ && f.frame <= *last_)
        throw Error(Errc::NonMonotonicFrame,
                    "frame " + std::to_string(f.frame) + " does not follow " + std::to_string(*last_));
    last_ = f.frame;
    return f;
}

std::string frame_to_json(const FrameDetections& frame) {
    ojson j;
    j["frame"] = frame.frame;
    if (frame.ts_ms) j["ts_ms"] = *frame.ts_ms;
    j["detections"] = ojson::array();
    for (const auto& d : frame.detections) {
        ojson dj;
        dj["label"] = d.label;
        dj["score"] = round6(d.score);
        dj["box"] = ojson::array({round6(d.box.x1), round6(d.box.y1), round6(d.box.x2), round6(d.box.y2)});
        j["detections"].push_back(std::move(dj));
    }
    return j.dump();
}

std::string event_to_json(const GestureEvent& event) {
    ojson j;
    j["kind"] = std::string(to_string(event.kind));
    j["tracks"] = event.track_ids;
    j["start"] = event.start_frame;
    j["end"] = event.end_frame;
    ojson params = ojson::object();
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, SwipeParams>) {
                params["dx"] = round6(p.dx);
                params["dy"] = round6(p.dy);
            } else if constexpr (std::is_same_v<T, ZoomParams>) {
                params["ratio"] = round6(p.ratio);
                params["d_start"] = round6(p.d_start);
                params["d_end"] = round6(p.d_end);
            } else if constexpr (std::is_same_v<T, DragParams>) {
                params["path"] = ojson::array();
                for (const auto& pt : p.path) params["path"].push_back(point_json(pt));
            } else {
                params["point"] = point_json(p.point);
            }
        },
        event.params);
    j["params"] = std::move(params);
    j["action"] = event.action;
    return j.dump();
}

std::string annotation_to_json(const AnnotatedFrame& frame) {
    ojson j;
    j["frame"] = frame.frame_id;
    j["labels"] = ojson::array();
    j["bboxes"] = ojson::array();
    for (const auto& lb : frame.boxes) {
        j["labels"].push_back(lb.label);
        j["bboxes"].push_back(
            ojson::array({round6(lb.box.x1), round6(lb.box.y1), round6(lb.box.x2), round6(lb.box.y2)}));
    }
    return j.dump();
}

std::string clip_plan_to_json(const ClipPlan& plan, const std::vector<std::string>& ops, std::uint64_t seed) {
    ojson j;
    j["indices"] = plan.indices;
    if (plan.sign.no_event)
        j["sign"] = nullptr;
    else
        j["sign"] = ojson::array({plan.sign.start, plan.sign.end});
    j["meta"]["ops"] = ops;
    j["meta"]["seed"] = seed;
    return j.dump();
}

std::string error_to_json(std::string_view code, std::string_view detail) {
    ojson j;
    j["error"] = std::string(code);
    j["detail"] = std::string(detail);
    return j.dump();
}

// --- sessions ---

Session::Session(const EngineSettings& settings) : engine_(settings.recognizer, settings.tracker, settings.actions) {}

Session::Reply Session::on_line(std::string_view line) {
    Reply reply;
    try {
        const FrameDetections frame = reader_.parse(line);
        for (const auto& ev : engine_.process(frame)) reply.lines.push_back(event_to_json(ev));
        reply.lines.push_back(ojson{{"ack", frame.frame}}.dump());
    } catch (const Error& e) {
        std::string detail = e.path().empty() ? e.detail() : e.path() + ": " + e.detail();
        reply.lines.push_back(error_to_json(to_string(e.code()), detail));
        reply.close = e.code() != Errc::SchemaViolation;
    }
    return reply;
}

Session::Reply Session::on_oversized_line() {
    return {{error_to_json(to_string(Errc::MalformedJson),
                           "line exceeds " + std::to_string(kMaxLineBytes) + " bytes")},
            true};
}

// --- server ---

std::pair<std::string, std::uint16_t> parse_bind_addr(std::string_view addr) {
    const auto colon = addr.rfind(':');
    if (colon == std::string_view::npos || colon == 0)
        throw Error(Errc::InvalidArgument, "bind address must look like host:port");
    const std::string_view port_text = addr.substr(colon + 1);
    unsigned port = 0;
    auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port > 65535)
        throw Error(Errc::InvalidArgument, "bad port in bind address '" + std::string(addr) + "'");
    return {std::string(addr.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

std::string default_bind_addr() {
    if (const char* env = std::getenv("GTK_BIND_ADDR"); env && *env) return env;
    return "127.0.0.1:7878";
}

Server::Server(EngineSettings settings, std::string addr) : settings_(std::move(settings)), addr_(std::move(addr)) {
    settings_.recognizer.validate();
    settings_.tracker.validate();
    check_action_map_total(settings_.actions);
}

Server::~Server() {
    stop();
    for (auto& t : workers_)
        if (t.joinable()) t.join();
}

std::uint16_t Server::listen() {
    const auto [host, port] = parse_bind_addr(addr_);
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (int rc = getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res); rc != 0)
        throw Error(Errc::InvalidArgument, "cannot resolve '" + host + "': " + gai_strerror(rc));
    std::unique_ptr<addrinfo, decltype(&freeaddrinfo)> guard(res, &freeaddrinfo);

    listen_fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (listen_fd_ < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(listen_fd_, res->ai_addr, res->ai_addrlen) < 0 || ::listen(listen_fd_, 16) < 0) {
        const std::string why = std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw std::runtime_error("cannot listen on " + addr_ + ": " + why);
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
    return port_;
}

void Server::run() {
    if (listen_fd_ < 0) listen();
    while (!stopping_) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (stopping_) break;
            if (errno == EINTR || errno == ECONNABORTED) continue;
            break;
        }
        std::lock_guard lock(mu_);
        if (stopping_) {
            ::close(fd);
            break;
        }
        open_fds_.push_back(fd);
        workers_.emplace_back([this, fd] { handle(fd); });
    }
}

void Server::stop() {
    if (stopping_.exchange(true)) return;
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    std::lock_guard lock(mu_);
    for (int fd : open_fds_) ::shutdown(fd, SHUT_RDWR);
}

namespace {

bool send_all(int fd, std::string_view data) {
    while (!data.empty()) {
        const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
}

}  // namespace

void Server::handle(int fd) {
    Session session(settings_);
    std::string buf;
    char chunk[4096];
    bool open = true;
    while (open) {
        const auto nl = buf.find('\n');
        if (nl == std::string::npos) {
            if (buf.size() > kMaxLineBytes) {
                for (const auto& l : session.on_oversized_line().lines) send_all(fd, l + "\n");
                break;
            }
            const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
            if (n < 0 && errno == EINTR) continue;
            if (n <= 0) break;
            buf.append(chunk, static_cast<std::size_t>(n));
            continue;
        }
        std::string line = buf.substr(0, nl);
        buf.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        Session::Reply reply = line.size() > kMaxLineBytes ? session.on_oversized_line() : session.on_line(line);
        std::string out;
        for (const auto& l : reply.lines) out += l + "\n";
        if (!send_all(fd, out)) break;
        open = !reply.close;
    }
    {
        std::lock_guard lock(mu_);
        std::erase(open_fds_, fd);
    }
    ::shutdown(fd, SHUT_RDWR);
    ::close(fd);
}

}  // namespace gtk
