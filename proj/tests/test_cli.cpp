#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "config.hpp"
#include "record.hpp"

using namespace paleocorr;
using cli::RecordFile;
using cli::RunConfig;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("/tmp/paleocorr_test_" + name) {
    std::ofstream(path) << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config rejects unknown keys and bad values") {
  RunConfig cfg;
  CHECK_THROWS_AS(cfg.set("no.such.key", "1"), DomainError);
  cfg.set("seed", "42");
  CHECK(cfg.get_u64("seed") == 42);
  cfg.set("seed", "abc");
  CHECK_THROWS_AS(cfg.get_u64("seed"), DomainError);
  cfg.set("alpha", "x");
  CHECK_THROWS_AS(cfg.get_double("alpha"), DomainError);
  cfg.set("inference.adapt", "maybe");
  CHECK_THROWS_AS(cfg.get_bool("inference.adapt"), DomainError);
  cfg.set("workers", "1.5");
  CHECK_THROWS_AS(cfg.get_int("workers"), DomainError);
}

TEST_CASE("config file parsing with comments and line numbers") {
  TempFile f("cfg",
             "# comment\n"
             "seed = 7\n"
             "experiment.n_pairs = 5\n");
  RunConfig cfg;
  cfg.load_file(f.path);
  CHECK(cfg.get_u64("seed") == 7);
  CHECK(cfg.get_int("experiment.n_pairs") == 5);

  TempFile bad("cfg_bad", "seed = 1\ntypo.key = 2\n");
  RunConfig cfg2;
  CHECK_THROWS_WITH_AS(cfg2.load_file(bad.path), doctest::Contains(":2"),
                       DomainError);
  TempFile noeq("cfg_noeq", "just a line\n");
  RunConfig cfg3;
  CHECK_THROWS_AS(cfg3.load_file(noeq.path), DomainError);
}

TEST_CASE("environment variable names") {
  CHECK(RunConfig::env_name("experiment.n_pairs") == "PALEOCORR_EXPERIMENT_N_PAIRS");
  CHECK(RunConfig::env_name("seed") == "PALEOCORR_SEED");
}

TEST_CASE("resolved config lists every key once") {
  RunConfig cfg;
  const std::string dump = cfg.resolved();
  CHECK(dump.find("seed = 0") != std::string::npos);
  CHECK(dump.find("windows.width = 5000") != std::string::npos);
}

TEST_CASE("list splitting") {
  const auto v = cli::split_list("LI, G(0.5) ,NV,");
  REQUIRE(v.size() == 3);
  CHECK(v[0] == "LI");
  CHECK(v[1] == "G(0.5)");
  CHECK(v[2] == "NV");
}

TEST_CASE("record files round trip and sort by axis") {
  RecordFile rec;
  rec.metadata["name"] = "demo";
  rec.depth = {0.0, 1.0, 2.0};
  rec.age = {100.0, 300.0, 200.0};  // deliberately unsorted
  rec.value = {1.0, 3.0, 2.0};
  TempFile f("rec", "");
  cli::save_record(f.path, rec);
  const RecordFile back = cli::load_record(f.path);
  CHECK(back.metadata.at("name") == "demo");
  REQUIRE(back.age.size() == 3);
  // sorted by age on load
  CHECK(back.age == std::vector<double>{100.0, 200.0, 300.0});
  CHECK(back.value == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(back.depth == std::vector<double>{0.0, 2.0, 1.0});
  CHECK(back.series().times == back.age);
}

TEST_CASE("record loader rejects malformed files") {
  TempFile noval("rec_noval", "depth\n1\n2\n");
  CHECK_THROWS_AS(cli::load_record(noval.path), DataError);
  TempFile noaxis("rec_noaxis", "value\n1\n2\n");
  CHECK_THROWS_AS(cli::load_record(noaxis.path), DataError);
  TempFile badcol("rec_badcol", "age,value,junk\n1,2,3\n");
  CHECK_THROWS_AS(cli::load_record(badcol.path), DataError);
  TempFile badnum("rec_badnum", "age,value\n1,x\n");
  CHECK_THROWS_WITH_AS(cli::load_record(badnum.path), doctest::Contains(":2"),
                       DataError);
  TempFile ragged("rec_ragged", "age,value\n1\n");
  CHECK_THROWS_AS(cli::load_record(ragged.path), DataError);
  CHECK_THROWS_AS(cli::load_record("/no/such/file"), DataError);
}
