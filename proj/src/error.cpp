#include "gtk/error.hpp"

namespace gtk {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument: return "invalid_argument";
        case Errc::ZeroDistance: return "zero_distance";
        case Errc::NotEnoughHands: return "not_enough_hands";
        case Errc::NonMonotonicFrame: return "non_monotonic_frame";
        case Errc::DegenerateDistance: return "degenerate_distance";
        case Errc::DegenerateProb: return "degenerate_prob";
        case Errc::UnknownKind: return "unknown_kind";
        case Errc::MalformedJson: return "malformed_json";
        case Errc::SchemaViolation: return "schema_violation";
    }
    return "unknown";
}

namespace {
std::string compose(Errc code, const std::string& detail, const std::string& path) {
    std::string msg(to_string(code));
    if (!path.empty()) msg += " at " + path;
    if (!detail.empty()) msg += ": " + detail;
    return msg;
}
}  // namespace

Error::Error(Errc code, std::string detail, std::string path)
    : std::runtime_error(compose(code, detail, path)),
      code_(code),
      detail_(std::move(detail)),
      path_(std::move(path)) {}

}  // namespace gtk
