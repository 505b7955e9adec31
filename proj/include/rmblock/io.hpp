#pragma once
#include <string>
#include <vector>

namespace rmb {

inline constexpr const char* kVersion = "rmblock 0.1.0";

// %.17g
std::string fmt17(double v);

// `log:a:b:n` or `lin:a:b:n`, endpoints included. Throws Config on malformed input.
std::vector<double> parse_grid(const std::string& spec);

// Writes to path.tmp and renames; nothing is left behind on failure.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace rmb
