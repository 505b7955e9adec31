#include "rmblock/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmblock/error.hpp"
#include "rmblock/parallel.hpp"

namespace rmb {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double parse_number(const std::string& s, const std::string& spec) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config, "bad number '" + s + "' in grid '" + spec + "'");
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4 || (parts[0] != "log" && parts[0] != "lin"))
    throw Error(ErrorKind::Config, "grid must look like log:a:b:n or lin:a:b:n, got '" + spec + "'");
  const double a = parse_number(parts[1], spec), b = parse_number(parts[2], spec);
  long n = 0;
  try {
    std::size_t used = 0;
    n = std::stol(parts[3], &used);
    if (used != parts[3].size()) n = 0;
  } catch (const std::exception&) {
    n = 0;
  }
  if (n < 1) throw Error(ErrorKind::Config, "grid point count must be a positive integer in '" + spec + "'");
  if (n == 1 && a != b) throw Error(ErrorKind::Config, "a one-point grid needs a == b");
  const bool log = parts[0] == "log";
  if (log && !(a > 0.0 && b > 0.0)) throw Error(ErrorKind::Config, "log grid endpoints must be positive");
  std::vector<double> g(n);
  for (long k = 0; k < n; ++k) {
    const double t = n == 1 ? 0.0 : double(k) / double(n - 1);
    g[k] = log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a);
  }
  g.front() = a;
  g.back() = b;
  return g;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + tmp + "'");
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw Error(ErrorKind::Io, "write to '" + tmp + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::Io, "cannot move '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RMBLOCK_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return 1;
}

}  // namespace rmb
