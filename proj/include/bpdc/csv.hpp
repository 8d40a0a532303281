#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace bpdc {

// Shortest round-trip decimal form; keeps emitted CSV byte-deterministic
// and exact under re-parsing.
inline void append_double(std::string& out, double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    out.append(buffer, ec == std::errc() ? ptr : buffer);
}

inline std::string format_double(double value) {
    std::string out;
    append_double(out, value);
    return out;
}

} // namespace bpdc
