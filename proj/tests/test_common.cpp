#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "crashwatch/common.hpp"

using namespace crashwatch;
namespace fs = std::filesystem;

TEST_CASE("rng is deterministic per seed") {
  Rng a(42), b(42), c(43);
  bool same = true, diff = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
    same = same && (x == y);
    diff = diff || (x != z);
  }
  CHECK(same);
  CHECK(diff);
}

TEST_CASE("rng uniform stays in [0,1)") {
  Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("rng uniform(lo,hi) respects bounds") {
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    double u = r.uniform(-0.1, 0.1);
    CHECK(u >= -0.1);
    CHECK(u < 0.1);
  }
}

TEST_CASE("rng below stays under n") {
  Rng r(11);
  for (int i = 0; i < 1000; ++i) CHECK(r.below(17) < 17);
}

TEST_CASE("shuffle permutes without loss") {
  Rng r(5);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8, 9};
  auto orig = v;
  r.shuffle(v);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == orig);
}

TEST_CASE("fork yields an independent stream") {
  Rng a(42);
  Rng child = a.fork();
  CHECK(child.next_u64() != Rng(42).next_u64());
}

TEST_CASE("atomic_write then read_file round trips") {
  fs::path p = fs::temp_directory_path() / "crashwatch_test_rw.txt";
  atomic_write(p, "hello\nworld\n");
  CHECK(read_file(p) == "hello\nworld\n");
  atomic_write(p, "second");
  CHECK(read_file(p) == "second");
  fs::remove(p);
}

TEST_CASE("read_file on missing path throws") {
  CHECK_THROWS_AS(read_file("/nonexistent/abc/def.txt"), ValidationError);
}

TEST_CASE("split, trim, to_lower basics") {
  CHECK(split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(split("", ',') == std::vector<std::string>{""});
  CHECK(trim("  x y \t") == "x y");
  CHECK(trim("") == "");
  CHECK(to_lower("AbC-99") == "abc-99");
}

TEST_CASE("parse_time_utc accepts epoch and ISO forms") {
  CHECK(parse_time_utc("1392000000") == 1392000000);
  CHECK(parse_time_utc(" 1392000000 ") == 1392000000);
  // 2014-02-10T00:00:00Z is 1391990400
  CHECK(parse_time_utc("2014-02-10T00:00:00") == 1391990400);
  CHECK(parse_time_utc("2014-02-10T08:30:00") == 1391990400 + 8 * 3600 + 30 * 60);
  CHECK(parse_time_utc("2014-02-10 08:30") == 1391990400 + 8 * 3600 + 30 * 60);
  CHECK_THROWS_AS(parse_time_utc("not a time"), ValidationError);
  CHECK_THROWS_AS(parse_time_utc(""), ValidationError);
}

TEST_CASE("error types are distinct runtime errors") {
  CHECK_THROWS_AS(throw ConfigError("x"), std::runtime_error);
  CHECK_THROWS_AS(throw ValidationError("x"), std::runtime_error);
  CHECK_THROWS_AS(throw DivergenceError("x"), std::runtime_error);
}
