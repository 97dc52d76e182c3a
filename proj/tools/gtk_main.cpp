// gtk: command-line entry points for the gesture toolkit.
//
// Exit codes: 0 success, 2 usage or schema errors, 1 internal errors.

#include <pthread.h>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gtk/annotate.hpp"
#include "gtk/clipaug.hpp"
#include "gtk/config.hpp"
#include "gtk/dynamics.hpp"
#include "gtk/error.hpp"
#include "gtk/kernels.hpp"
#include "gtk/scoring.hpp"
#include "gtk/stream.hpp"
#include "gtk/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

/// A user-facing failure with its exit code.
struct Failure {
    int code;
    std::string message;
};

gtk::Config config_or_default(const std::string& path) {
    return path.empty() ? gtk::Config{} : gtk::load_config(path);
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (path != "-") {
        file.open(path, std::ios::binary);
        if (!file) throw Failure{kExitUsage, "cannot open '" + path + "'"};
        in = &file;
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(*in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

/// Parses non-blank lines, naming the 1-based line number of the first error.
std::vector<std::pair<std::size_t, gtk::FrameDetections>> parse_detections(const std::vector<std::string>& lines) {
    gtk::FrameReader reader;
    std::vector<std::pair<std::size_t, gtk::FrameDetections>> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        try {
            out.emplace_back(i + 1, reader.parse(lines[i]));
        } catch (const gtk::Error& e) {
            throw Failure{kExitUsage, "line " + std::to_string(i + 1) + ": " + e.what()};
        }
    }
    return out;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw Failure{kExitUsage, "cannot write '" + path + "'"};
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

gtk::SignBoundary parse_sign(const std::string& text) {
    if (text.empty()) return gtk::SignBoundary::none();
    std::int64_t s = 0, e = 0;
    char comma = 0;
    std::istringstream ss(text);
    if (!(ss >> s >> comma >> e) || comma != ',' || !ss.eof())
        throw Failure{kExitUsage, "--sign expects START,END"};
    return {s, e, false};
}

// --- subcommands ---

struct AnnotateArgs {
    std::string meta, in = "-", out, config, cls;
    bool flip = false;
};

int run_annotate(const AnnotateArgs& a) {
    const gtk::Config cfg = config_or_default(a.config);
    const gtk::RegistryFile reg = gtk::load_registry(a.meta);
    const auto frames = parse_detections(read_lines(a.in));

    std::optional<std::string> fixed = a.cls.empty() ? reg.target : std::optional<std::string>(a.cls);
    if (fixed && !reg.registry.find(*fixed)) throw Failure{kExitUsage, "class '" + *fixed + "' is not registered"};

    std::vector<gtk::kernels::AnnotationJob> jobs;
    jobs.reserve(frames.size());
    for (const auto& [line, f] : frames) {
        const gtk::GestureClassMeta* meta = fixed ? reg.registry.find(*fixed) : nullptr;
        if (!meta) {
            // Without a fixed class, the frame shows the registered gesture of its
            // most confident detection.
            const gtk::Detection* best = nullptr;
            for (const auto& d : f.detections)
                if (reg.registry.find(d.label) && (!best || d.score > best->score)) best = &d;
            if (!best) throw Failure{kExitUsage, "line " + std::to_string(line) + ": no registered gesture label"};
            meta = reg.registry.find(best->label);
        }
        jobs.push_back({&f, meta});
    }

    std::vector<gtk::AnnotatedFrame> annotated;
    try {
        annotated = gtk::kernels::annotate_batch(jobs);
    } catch (const gtk::kernels::ItemError& e) {
        throw Failure{kExitUsage, "line " + std::to_string(frames[e.index()].first) + ": " + e.what()};
    }

    if (a.flip) {
        std::set<std::string> blacklist = cfg.blacklist;
        blacklist.merge(reg.registry.mirror_blacklist());
        for (auto& fr : annotated)
            if (auto flipped = gtk::flip_annotations(fr, blacklist)) fr = std::move(*flipped);
    }

    Output out(a.out);
    auto& os = out.stream();
    os << "[";
    for (std::size_t i = 0; i < annotated.size(); ++i) os << (i ? ",\n" : "\n") << gtk::annotation_to_json(annotated[i]);
    os << (annotated.empty() ? "]\n" : "\n]\n");
    return kExitOk;
}

struct AugmentArgs {
    std::int64_t len = 0, step = 1, start = 0;
    std::size_t clip = 0;
    std::string sign, ops = "none", config;
    std::optional<std::uint64_t> seed;
};

int run_augment(const AugmentArgs& a) {
    const gtk::Config cfg = config_or_default(a.config);
    const std::uint64_t seed = a.seed.value_or(cfg.seed);
    const std::size_t clip = a.clip ? a.clip : static_cast<std::size_t>(a.len);
    const gtk::ClipPlan base = gtk::sample_window(a.len, clip, a.step, a.start, parse_sign(a.sign));
    const auto ops = gtk::parse_pipeline(a.ops, cfg.augment);
    gtk::Rng rng(seed);
    const auto res = gtk::apply_pipeline(base, ops, cfg.augment, rng);
    std::cout << gtk::clip_plan_to_json(res.plan, res.applied, seed) << "\n";
    return kExitOk;
}

struct ScoreArgs {
    std::int64_t len = 0, size = 32, stride = 1;
    std::string sign, mode, config;
};

int run_score(const ScoreArgs& a) {
    const gtk::Config cfg = config_or_default(a.config);
    const gtk::IouMode mode = a.mode.empty() ? cfg.iou_mode : gtk::iou_mode_from_string(a.mode);
    const gtk::SignBoundary sign = parse_sign(a.sign);
    if (!sign.valid_within(a.len)) throw Failure{kExitUsage, "--sign must lie inside the video"};
    const auto rows = gtk::kernels::score_windows(a.len, sign, a.size, a.stride, mode);
    std::cout << "window_start,window_end,iou,t_start,t_end\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%lld,%lld,%.6g,%.6g,%.6g\n", static_cast<long long>(r.window.start),
                      static_cast<long long>(r.window.end), r.iou, r.target.start, r.target.end);
        std::cout << buf;
    }
    return kExitOk;
}

int run_recognize(const std::string& in, const std::string& config) {
    const gtk::Config cfg = config_or_default(config);
    const auto lines = read_lines(in);
    gtk::Engine engine(cfg.recognizer, cfg.tracker, cfg.actions);
    gtk::FrameReader reader;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        try {
            for (const auto& ev : engine.process(reader.parse(lines[i]))) std::cout << gtk::event_to_json(ev) << "\n";
        } catch (const gtk::Error& e) {
            std::cout.flush();
            throw Failure{kExitUsage, "line " + std::to_string(i + 1) + ": " + e.what()};
        }
    }
    return kExitOk;
}

int run_serve(const std::string& addr, const std::string& config) {
    const gtk::Config cfg = config_or_default(config);

    // SIGINT/SIGTERM are handled by a dedicated thread; every other thread
    // inherits the blocked mask.
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

    gtk::Server server(cfg.engine_settings(), addr.empty() ? gtk::default_bind_addr() : addr);
    const auto port = server.listen();
    std::cerr << "gtk: listening on port " << port << std::endl;

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&stop_signals, &sig);
        server.stop();
    });
    server.run();
    waiter.join();
    return kExitOk;
}

int run_gen(const std::string& kind, double noise, std::uint64_t seed, const std::string& out_path) {
    const auto frames = gtk::generate_trace(gtk::trace_kind_from_string(kind), noise, seed);
    Output out(out_path);
    for (const auto& f : frames) out.stream() << gtk::frame_to_json(f) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic hand-gesture recognition, annotation and clip augmentation toolkit"};
    app.require_subcommand(1);

    AnnotateArgs ann;
    auto* annotate = app.add_subcommand("annotate", "Label gesticulating hands in detection frames");
    annotate->add_option("--meta", ann.meta, "Gesture class registry (JSON)")->required();
    annotate->add_option("--in", ann.in, "Detections JSONL ('-' for stdin)");
    annotate->add_option("--out", ann.out, "Annotations JSON (stdout if omitted)");
    annotate->add_option("--class", ann.cls, "Gesture class shown in every frame");
    annotate->add_flag("--flip", ann.flip, "Mirror frames whose labels are not blacklisted");
    annotate->add_option("--config", ann.config, "Config file");

    AugmentArgs aug;
    auto* augment = app.add_subcommand("augment", "Print an augmented clip plan");
    augment->add_option("--len", aug.len, "Video length in frames")->required()->check(CLI::PositiveNumber);
    augment->add_option("--clip", aug.clip, "Clip length (default: video length)");
    augment->add_option("--step", aug.step, "Sampling step")->check(CLI::PositiveNumber);
    augment->add_option("--start", aug.start, "First sampled frame")->check(CLI::NonNegativeNumber);
    augment->add_option("--sign", aug.sign, "Sign boundary START,END in video frames");
    augment->add_option("--ops", aug.ops, "Pipeline, e.g. speedup:2,drop:0.1,shift:-5:5 or random");
    augment->add_option("--seed", aug.seed, "Random seed");
    augment->add_option("--config", aug.config, "Config file");

    ScoreArgs sc;
    auto* score = app.add_subcommand("score", "Score sliding windows against a sign boundary (CSV)");
    score->add_option("--len", sc.len, "Video length in frames")->required()->check(CLI::PositiveNumber);
    score->add_option("--sign", sc.sign, "Sign boundary START,END (omit for a no-event video)");
    score->add_option("--size", sc.size, "Window size")->check(CLI::PositiveNumber);
    score->add_option("--stride", sc.stride, "Window stride")->check(CLI::PositiveNumber);
    score->add_option("--mode", sc.mode, "frame_count or eq1");
    score->add_option("--config", sc.config, "Config file");

    std::string rec_in = "-", rec_config;
    auto* recognize = app.add_subcommand("recognize", "Recognize dynamic gestures in a detections file");
    recognize->add_option("--in", rec_in, "Detections JSONL ('-' for stdin)");
    recognize->add_option("--config", rec_config, "Config file");

    std::string serve_addr, serve_config;
    auto* serve = app.add_subcommand("serve", "Serve the recognizer over TCP");
    serve->add_option("--addr", serve_addr, "host:port (default $GTK_BIND_ADDR or 127.0.0.1:7878)");
    serve->add_option("--config", serve_config, "Config file");

    std::string gen_kind, gen_out;
    double gen_noise = 0.0;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("gen-synthetic", "Write a synthetic detections trace");
    gen->add_option("--kind", gen_kind, "Event kind or 'none'")->required();
    gen->add_option("--noise", gen_noise, "Center jitter sigma")->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--out", gen_out, "Output file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*annotate) return run_annotate(ann);
        if (*augment) return run_augment(aug);
        if (*score) return run_score(sc);
        if (*recognize) return run_recognize(rec_in, rec_config);
        if (*serve) return run_serve(serve_addr, serve_config);
        if (*gen) return run_gen(gen_kind, gen_noise, gen_seed, gen_out);
    } catch (const Failure& f) {
        std::cerr << "gtk: " << f.message << "\n";
        return f.code;
    } catch (const gtk::Error& e) {
        std::cerr << "gtk: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "gtk: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
