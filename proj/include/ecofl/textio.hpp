// textio.hpp - locale-independent number formatting shared by the CSV/JSON
// writers and the deterministic state dumps.

#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace ecofl {

// Formats with 9 significant digits via std::to_chars, so output is
// byte-identical across locales and platforms. Infinities serialize as
// "inf"/"-inf", NaN as "nan".
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v,
                             std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

// Shortest decimal that recovers the exact double on read-back. Used for
// weight files so save/load round-trips bit-for-bit.
inline std::string format_double_exact(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_int(long long v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace ecofl
