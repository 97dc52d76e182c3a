#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gtk {

enum class Errc {
    InvalidArgument,
    ZeroDistance,
    NotEnoughHands,
    NonMonotonicFrame,
    DegenerateDistance,
    DegenerateProb,
    UnknownKind,
    MalformedJson,
    SchemaViolation,
};

/// Stable snake_case name, used on the wire and in CLI diagnostics.
std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string detail, std::string path = {});

    Errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }
    /// JSON-style field path for schema errors ("detections[0].box"), empty otherwise.
    const std::string& path() const noexcept { return path_; }

private:
    Errc code_;
    std::string detail_;
    std::string path_;
};

}  // namespace gtk
