#pragma once

#include <charconv>
#include <cstdint>
#include <string>

// Shortest round-trip number formatting for CSV output. Locale-independent,
// byte-stable across runs: the determinism contract for emitted files rests
// on this being the only float formatter the commands use.

namespace moskalloc {

inline std::string csv_num(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string csv_num(std::int64_t v) {
    char buf[24];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace moskalloc
