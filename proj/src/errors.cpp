#include "cclab/errors.hpp"

#include <cstdio>

namespace cclab {

std::function<void(const std::string&)>& warning_sink() {
    static std::function<void(const std::string&)> sink = [](const std::string& msg) {
        std::fprintf(stderr, "[cclab warning] %s\n", msg.c_str());
    };
    return sink;
}

void emit_warning(const std::string& message) {
    if (warning_sink()) warning_sink()(message);
}

}  // namespace cclab
