#include "gtk/config.hpp"

#include <fstream>
#include <sstream>

#include "gtk/error.hpp"
#include "json.hpp"

namespace gtk {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& detail) {
    throw Error(Errc::SchemaViolation, detail, path);
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(Errc::MalformedJson, e.what());
    }
}

/// Walks one JSON object, handing each known key to a reader and rejecting the rest.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) schema(path_.empty() ? "$" : path_, "expected an object");
    }

    std::string key_path(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    const json* get(std::string_view key) {
        seen_.insert(std::string(key));
        auto it = obj_.find(std::string(key));
        return it == obj_.end() ? nullptr : &*it;
    }

    void read(std::string_view key, double& out) {
        if (const json* v = get(key)) {
            if (!v->is_number()) schema(key_path(key), "expected a number");
            out = v->get<double>();
        }
    }
    void read(std::string_view key, std::int64_t& out) {
        if (const json* v = get(key)) {
            if (!v->is_number_integer()) schema(key_path(key), "expected an integer");
            out = v->get<std::int64_t>();
        }
    }
    void read(std::string_view key, std::size_t& out) {
        if (const json* v = get(key)) {
            if (!v->is_number_unsigned()) schema(key_path(key), "expected a non-negative integer");
            out = v->get<std::size_t>();
        }
    }
    void read(std::string_view key, std::uint64_t& out, int) {
        if (const json* v = get(key)) {
            if (!v->is_number_unsigned()) schema(key_path(key), "expected a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }
    void read(std::string_view key, bool& out) {
        if (const json* v = get(key)) {
            if (!v->is_boolean()) schema(key_path(key), "expected a boolean");
            out = v->get<bool>();
        }
    }
    void read(std::string_view key, std::string& out) {
        if (const json* v = get(key)) {
            if (!v->is_string()) schema(key_path(key), "expected a string");
            out = v->get<std::string>();
        }
    }
    void read(std::string_view key, std::set<std::string>& out) {
        if (const json* v = get(key)) {
            if (!v->is_array()) schema(key_path(key), "expected an array of strings");
            out.clear();
            for (const auto& item : *v) {
                if (!item.is_string()) schema(key_path(key), "expected an array of strings");
                out.insert(item.get<std::string>());
            }
        }
    }

    void finish() const {
        for (const auto& [key, _] : obj_.items())
            if (!seen_.contains(key)) schema(key_path(key), "unknown key");
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

template <typename F>
void validated(const std::string& path, F&& check) {
    try {
        check();
    } catch (const Error& e) {
        if (e.code() == Errc::InvalidArgument) schema(path, e.detail());
        throw;
    }
}

}  // namespace

void Config::validate() const {
    recognizer.validate();
    tracker.validate();
    augment.validate();
    check_action_map_total(actions);
}

Config parse_config(std::string_view text) {
    const json root = parse_json(text);
    ObjectReader top(root, "");
    Config cfg;

    const json* version = top.get("version");
    if (!version) schema("version", "missing field");
    if (!version->is_number_integer() || version->get<int>() != kConfigVersion)
        schema("version", "unsupported config version (expected " + std::to_string(kConfigVersion) + ")");

    if (const json* r = top.get("recognizer")) {
        ObjectReader rd(*r, "recognizer");
        auto& c = cfg.recognizer;
        rd.read("swipe_labels", c.swipe_labels);
        rd.read("swipe_min_disp", c.swipe_min_disp);
        rd.read("swipe_axis_ratio", c.swipe_axis_ratio);
        rd.read("swipe_window", c.swipe_window);
        rd.read("zoom_two_hand_labels", c.zoom_two_hand_labels);
        rd.read("zoom_ratio", c.zoom_ratio);
        rd.read("zoom_window", c.zoom_window);
        rd.read("single_hand_zoom", c.single_hand_zoom);
        rd.read("single_hand_zoom_labels", c.single_hand_zoom_labels);
        rd.read("click_label", c.click_label);
        rd.read("dwell_click_frames", c.dwell_click_frames);
        rd.read("dwell_radius", c.dwell_radius);
        rd.read("double_click_gap", c.double_click_gap);
        rd.read("drag_arm_label", c.drag_arm_label);
        rd.read("drag_engage_label", c.drag_engage_label);
        rd.read("drag_arm_frames", c.drag_arm_frames);
        rd.read("drag_confirm_frames", c.drag_confirm_frames);
        rd.read("label_purity", c.label_purity);
        rd.read("cooldown", c.cooldown);
        rd.finish();
        validated("recognizer", [&] { c.validate(); });
    }

    if (const json* t = top.get("tracker")) {
        ObjectReader rd(*t, "tracker");
        rd.read("iou_gate", cfg.tracker.iou_gate);
        rd.read("max_age", cfg.tracker.max_age);
        rd.read("history_len", cfg.tracker.history_len);
        rd.finish();
        validated("tracker", [&] { cfg.tracker.validate(); });
    }

    if (const json* a = top.get("augment")) {
        ObjectReader rd(*a, "augment");
        auto& p = cfg.augment;
        rd.read("speed_factor", p.speed_factor);
        rd.read("slow_factor", p.slow_factor);
        rd.read("drop_ratio", p.drop_ratio);
        rd.read("add_ratio", p.add_ratio);
        if (const json* s = rd.get("shift")) {
            if (!s->is_array() || s->size() != 2 || !(*s)[0].is_number_integer() || !(*s)[1].is_number_integer())
                schema("augment.shift", "expected [lo, hi] integers");
            p.shift = {(*s)[0].get<std::int64_t>(), (*s)[1].get<std::int64_t>()};
        }
        rd.read("p_drop", p.p_drop);
        rd.read("p_add", p.p_add);
        rd.read("p_speed", p.p_speed);
        rd.read("p_slow", p.p_slow);
        rd.finish();
        validated("augment", [&] { p.validate(); });
    }

    if (const json* m = top.get("iou_mode")) {
        if (!m->is_string()) schema("iou_mode", "expected a string");
        validated("iou_mode", [&] { cfg.iou_mode = iou_mode_from_string(m->get<std::string>()); });
    }
    top.read("blacklist", cfg.blacklist);

    if (const json* acts = top.get("actions")) {
        if (!acts->is_object()) schema("actions", "expected an object");
        const ActionMap defaults = default_action_map();
        for (const auto& [key, value] : acts->items()) {
            if (!defaults.count(key)) schema("actions." + key, "unknown event kind or gesture label");
            if (!value.is_string()) schema("actions." + key, "expected a string");
            cfg.actions[key] = value.get<std::string>();
        }
    }
    top.read("seed", cfg.seed, 0);
    top.finish();

    validated("$", [&] { cfg.validate(); });
    return cfg;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::InvalidArgument, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Config load_config(const std::string& path) { return parse_config(read_file(path)); }

RegistryFile parse_registry(std::string_view text) {
    const json root = parse_json(text);
    ObjectReader top(root, "");
    const json* version = top.get("version");
    if (!version || !version->is_number_integer() || version->get<int>() != kConfigVersion)
        schema("version", "expected version " + std::to_string(kConfigVersion));

    RegistryFile out;
    if (const json* t = top.get("target")) {
        if (!t->is_string()) schema("target", "expected a string");
        out.target = t->get<std::string>();
    }
    const json* classes = top.get("classes");
    if (!classes || !classes->is_array()) schema("classes", "expected an array");
    std::vector<GestureClassMeta> metas;
    for (std::size_t i = 0; i < classes->size(); ++i) {
        const std::string path = "classes[" + std::to_string(i) + "]";
        ObjectReader rd((*classes)[i], path);
        GestureClassMeta m;
        std::string arity = "one_handed";
        rd.read("label", m.label);
        rd.read("arity", arity);
        rd.read("mirror_safe", m.mirror_safe);
        rd.finish();
        if (m.label.empty()) schema(path + ".label", "missing or empty label");
        validated(path + ".arity", [&] { m.arity = arity_from_string(arity); });
        metas.push_back(std::move(m));
    }
    top.finish();
    validated("classes", [&] { out.registry = ClassRegistry(std::move(metas)); });
    if (out.target && !out.registry.find(*out.target)) schema("target", "target is not a registered class");
    return out;
}

RegistryFile load_registry(const std::string& path) { return parse_registry(read_file(path)); }

ClassRegistry default_gesture_registry() {
    using A = Arity;
    return ClassRegistry({
        {"thumb_index", A::OneHanded, true},  {"point", A::OneHanded, true},
        {"thumb_index2", A::TwoHanded, true}, {"pinkie", A::OneHanded, true},
        {"middle_finger", A::OneHanded, true}, {"holy", A::OneHanded, true},
        {"grip", A::OneHanded, true},         {"grabbing", A::OneHanded, true},
        {"three3", A::OneHanded, true},       {"timeout", A::TwoHanded, true},
        {"take_photo", A::TwoHanded, true},   {"xsign", A::TwoHandedXsign, true},
        {"three_gun", A::OneHanded, true},    {"heart", A::TwoHanded, true},
        {"heart2", A::TwoHanded, true},
    });
}

}  // namespace gtk
