#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "klab/runner.hpp"

using namespace klab::runner;

TEST_CASE("schema and config") {
  CHECK(subcommands().size() == 9);
  CHECK_THROWS_AS(find_subcommand("nope"), ConfigError);
  Config c(find_subcommand("identities"));
  CHECK(c.get_int("trials") == 1000);
  CHECK(c.get_seed() == 7);
  CHECK_THROWS_AS(c.set("bogus", "1"), ConfigError);
  c.set("trials", "12x");
  CHECK_THROWS_AS(c.get_int("trials"), ConfigError);
  c.set("trials", "40");
  CHECK(c.echo() == "max=10000;seed=7;trials=40;workers=1");

  Config l(find_subcommand("equidist"));
  CHECK(l.get_int_list("ladder") == std::vector<std::int64_t>{64, 128, 256, 512});
  l.set("ladder", "4,,8");
  CHECK_THROWS_AS(l.get_int_list("ladder"), ConfigError);
}

TEST_CASE("config file merge") {
  const auto path = std::filesystem::temp_directory_path() / "klab_runner_test.cfg";
  {
    std::ofstream f(path);
    f << "# comment\n  trials = 25  \n\nseed=3 # trailing\n";
  }
  Config c(find_subcommand("identities"));
  c.merge_file(path.string());
  CHECK(c.get_int("trials") == 25);
  CHECK(c.get_seed() == 3);
  {
    std::ofstream f(path);
    f << "unknown = 1\n";
  }
  CHECK_THROWS_AS(c.merge_file(path.string()), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("records are deterministic and worker-independent") {
  Config c(find_subcommand("detcount"));
  c.set("specs", "6");
  c.set("m_max", "64");
  c.set("n_max", "12");
  const auto a = run(c);
  c.set("workers", "3");
  const auto b = run(c);
  REQUIRE(a.records.size() == b.records.size());
  CHECK(a.passed());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].measured == b.records[i].measured);
    CHECK(a.records[i].label == b.records[i].label);
  }
  CHECK(a.records[0].id.size() == 16);
}

TEST_CASE("failed assertions give exit status 1; bad values give ConfigError") {
  Config c(find_subcommand("equidist"));
  c.set("ladder", "64,32");  // discrepancy grows as N shrinks
  c.set("allowed_inversions", "0");
  CHECK(run(c).exit_code() == kExitAssertion);
  c.set("density", "1.5");
  CHECK_THROWS_AS(run(c), ConfigError);
  Config d(find_subcommand("compdiv-check"));
  d.set("M", "0");
  CHECK_THROWS_AS(run(d), ConfigError);
}

TEST_CASE("CSV and JSON rendering") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(3.0) == "3");
  Record r;
  r.id = "00ff";
  r.timestamp = "2020-01-01T00:00:00Z";
  r.subcommand = "identities";
  r.seed = 7;
  r.params = "a=1;b=2";
  r.measured = {{"x", 0.5}};
  r.assertions = {{"ok", true}, {"bad", false}};
  CHECK(csv_row(r) == "00ff,2020-01-01T00:00:00Z,identities,7,a=1;b=2,x=0.5,ok=pass;bad=fail");
  CHECK_FALSE(r.passed());
  CHECK(json_line(r).find("\"measured\":{\"x\":0.5}") != std::string::npos);

  const auto path = std::filesystem::temp_directory_path() / "klab_runner_test.csv";
  std::filesystem::remove(path);
  append_csv(path.string(), {r});
  append_csv(path.string(), {r});
  std::ifstream in(path);
  std::string line;
  int lines = 0, headers = 0;
  while (std::getline(in, line)) {
    ++lines;
    headers += line == kCsvHeader ? 1 : 0;
  }
  CHECK(lines == 3);
  CHECK(headers == 1);
  std::filesystem::remove(path);
}
