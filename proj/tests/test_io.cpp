#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sblgamp/io.hpp"
#include "sblgamp/synth.hpp"

using namespace sblgamp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("sblgamp_io_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("format_double round trips exactly") {
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::exp(20.0 * (rng.uniform01() - 0.5)) * (rng.uniform01() < 0.5 ? -1 : 1);
    const std::string s = io::format_double(v);
    CHECK(io::parse_double(s, "test") == v);
  }
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::parse_double("-1.5e-3", "test") == -0.0015);
  CHECK_THROWS_AS(io::parse_double("1.0x", "test"), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_double("", "test"), std::invalid_argument);
}

TEST_CASE("csv matrices round trip bitwise") {
  TempDir dir;
  Rng rng(9);
  const Matrix m = gen_matrix(7, 5, rng);
  const std::string path = dir.file("m.csv");
  io::save_matrix(path, m);
  const Matrix back = io::load_matrix(path);
  CHECK(back == m);

  const Vector v = m.col(2);
  const std::string vpath = dir.file("v.csv");
  io::save_vector(vpath, v);
  CHECK(io::load_vector(vpath) == v);
  CHECK_THROWS_AS(io::load_vector(path), std::invalid_argument);
}

TEST_CASE("binary matrices round trip bitwise") {
  TempDir dir;
  Rng rng(10);
  const Matrix m = gen_matrix(6, 9, rng);
  const std::string path = dir.file("m.bin");
  io::save_matrix(path, m);
  CHECK(io::load_matrix(path) == m);
  // header: 2 * uint32 + row-major payload
  CHECK(fs::file_size(path) == 8 + 6 * 9 * sizeof(double));
}

TEST_CASE("malformed matrix files are rejected with location info") {
  TempDir dir;
  const std::string ragged = dir.file("ragged.csv");
  std::ofstream(ragged) << "1,2,3\n4,5\n";
  CHECK_THROWS_WITH_AS(io::load_matrix(ragged),
                       doctest::Contains("expected 3 columns"), std::invalid_argument);

  const std::string bad = dir.file("bad.csv");
  std::ofstream(bad) << "1,2\n3,oops\n";
  CHECK_THROWS_WITH_AS(io::load_matrix(bad), doctest::Contains(":2"), std::invalid_argument);

  const std::string nan_file = dir.file("nan.csv");
  std::ofstream(nan_file) << "1,2\nnan,4\n";
  CHECK_THROWS_AS(io::load_matrix(nan_file), std::invalid_argument);

  CHECK_THROWS_AS(io::load_matrix(dir.file("missing.csv")), std::invalid_argument);

  const std::string truncated = dir.file("trunc.bin");
  std::ofstream(truncated, std::ios::binary) << "\x02\x00\x00\x00";
  CHECK_THROWS_AS(io::load_matrix(truncated), std::invalid_argument);
}

TEST_CASE("kv config parses dotted keys strictly") {
  const io::KvConfig cfg = io::KvConfig::parse_text(
      "# comment line\n"
      "em.tol_outer = 1e-10\n"
      "sweep.trials = 50   # trailing comment\n"
      "\n"
      "solver = both\n",
      "inline");
  CHECK(cfg.has("em.tol_outer"));
  CHECK(cfg.get("sweep.trials") == "50");
  CHECK(cfg.get("solver") == "both");

  const auto unknown = cfg.unknown_keys({"em.tol_outer", "sweep.trials", "solver"});
  CHECK(unknown.empty());
  const auto some = cfg.unknown_keys({"solver"});
  REQUIRE(some.size() == 2);
  CHECK(some[0] == "em.tol_outer");

  CHECK_THROWS_WITH_AS(io::KvConfig::parse_text("a = 1\na = 2\n", "inline"),
                       doctest::Contains("duplicate key"), std::invalid_argument);
  CHECK_THROWS_AS(io::KvConfig::parse_text("not a pair\n", "inline"), std::invalid_argument);
  CHECK_THROWS_AS(io::KvConfig::parse_text("= 3\n", "inline"), std::invalid_argument);
}

TEST_CASE("kv config serialization reparses identically") {
  io::KvConfig cfg;
  cfg.set("sweep.n", "200");
  cfg.set("em.tol_outer", io::format_double(1e-10));
  cfg.set("solver", "sbl-gamp");
  const std::string text = cfg.to_text();
  const io::KvConfig back = io::KvConfig::parse_text(text, "inline");
  CHECK(back.values() == cfg.values());
}
