#pragma once

#include <array>
#include <charconv>
#include <ostream>
#include <string>
#include <string_view>

namespace rbffr::csv {

/// Shortest decimal representation that round-trips the 64-bit value.
inline std::string format_double(double v)
{
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

inline void write_field(std::ostream& os, double v) { os << format_double(v); }
inline void write_field(std::ostream& os, std::string_view v) { os << v; }
inline void write_field(std::ostream& os, int v) { os << v; }
inline void write_field(std::ostream& os, long v) { os << v; }
inline void write_field(std::ostream& os, unsigned long v) { os << v; }
inline void write_field(std::ostream& os, unsigned long long v) { os << v; }

template <typename First, typename... Rest>
void write_row(std::ostream& os, const First& first, const Rest&... rest)
{
    write_field(os, first);
    ((os << ',', write_field(os, rest)), ...);
    os << '\n';
}

}  // namespace rbffr::csv
