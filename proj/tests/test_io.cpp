#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rmblock/error.hpp"
#include "rmblock/io.hpp"
#include "rmblock/parallel.hpp"

using namespace rmb;

TEST_CASE("grids") {
  const auto lin = parse_grid("lin:-1:1:5");
  CHECK(lin == std::vector<double>{-1, -0.5, 0, 0.5, 1});
  const auto lg = parse_grid("log:1e-10:1e-6:21");
  CHECK(lg.size() == 21);
  CHECK(lg.front() == 1e-10);
  CHECK(lg.back() == 1e-6);
  CHECK(lg[5] == doctest::Approx(1e-9).epsilon(1e-12));
  CHECK(parse_grid("lin:2:2:1") == std::vector<double>{2});
  for (const char* bad : {"lin:0:1", "cubic:0:1:3", "log:0:1:3", "lin:a:1:3", "lin:0:1:0", "lin:0:1:2.5", "lin:0:1:1", "lin:0:inf:3"})
    CHECK_THROWS_AS(parse_grid(bad), Error);
}

TEST_CASE("fmt17 round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(fmt17(v)) == v);
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "rmblock_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.csv").string();
  write_file_atomic(path, "a,b\n1,2\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "a,b\n1,2\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  CHECK_THROWS_AS(write_file_atomic((dir / "missing" / "x.csv").string(), "x"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_threads(3) == 3);
  setenv("RMBLOCK_THREADS", "5", 1);
  CHECK(resolve_threads(0) == 5);
  setenv("RMBLOCK_THREADS", "x", 1);
  CHECK(resolve_threads(0) == 1);
  unsetenv("RMBLOCK_THREADS");
  CHECK(resolve_threads(0) == 1);
}

TEST_CASE("parallel_for writes by index and rethrows") {
  std::vector<long> out(1000, -1);
  parallel_for(1000, 4, [&](long i) { out[i] = i * i; });
  for (long i = 0; i < 1000; ++i) CHECK(out[i] == i * i);
  CHECK_THROWS_AS(parallel_for(10, 3, [](long i) {
                    if (i == 7) throw Error(ErrorKind::InvalidArgument, "boom");
                  }),
                  Error);
}
