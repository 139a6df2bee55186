#ifndef CCLAB_ERRORS_HPP
#define CCLAB_ERRORS_HPP

#include <functional>
#include <stdexcept>
#include <string>

namespace cclab {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A state value outside the range the noise kind accepts.
struct InvalidState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Enumeration/decoding request beyond the configured cap.
struct CapacityExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Density evaluation on a zero-probability sequence.
struct InfeasibleSample : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotApplicable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-fatal diagnostics (state clamping, skipped grid cells) are routed here.
// Default sink writes to stderr; tests and the CLI may replace it.
std::function<void(const std::string&)>& warning_sink();
void emit_warning(const std::string& message);

}  // namespace cclab

#endif
