#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "thermoshift/config.hpp"
#include "thermoshift/report.hpp"
#include "thermoshift/runner.hpp"

using namespace thermoshift;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("thermoshift-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter;
};
int TempDir::counter = 0;

}  // namespace

TEST_CASE("config sections and keys parse") {
  const std::string text =
      "# comment\n"
      "[shift X]\n"
      "alphabet = 2\n"
      "\n"
      "[job a]\n"
      "op = shift_info\n"
      "atom = 1\n"
      "atom = 2\n";
  const Config cfg = parse_config_text(text, "inline");
  REQUIRE(cfg.sections.size() == 2);
  const ConfigSection& x = cfg.require("shift", "X");
  CHECK(x.get("alphabet") == "2");
  CHECK(x.get_or("missing", "fallback") == "fallback");
  const ConfigSection& job = cfg.require("job", "a");
  CHECK(job.all("atom").size() == 2);
  CHECK(job.all("atom")[1]->value == "2");
  CHECK(cfg.find("shift", "Y") == nullptr);
  CHECK(cfg.of_kind("job").size() == 1);
}

TEST_CASE("config errors carry line numbers") {
  try {
    parse_config_text("[shift X]\nalphabet = 2\nbroken line\n", "inline");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("inline:3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("key = before any section\n", "inline"),
                  Error);
  try {
    const Config cfg = parse_config_text("[shift X]\nalphabet = 2\n", "x");
    cfg.require("shift", "X").get("rows");
    FAIL("expected a missing-key error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("rows") != std::string::npos);
    CHECK(msg.find("shift X") != std::string::npos);
  }
}

TEST_CASE("list splitting") {
  const auto parts = split_list(" a b ; c ;; d ", ';');
  REQUIRE(parts.size() == 4);
  CHECK(parts[0] == "a b");
  CHECK(parts[2].empty());
  const auto ws = split_ws("  1  22\t3 ");
  REQUIRE(ws.size() == 3);
  CHECK(ws[1] == "22");
}

TEST_CASE("report rendering is stable") {
  TempDir tmp;
  Report r;
  r.title = "demo";
  r.add("alpha", 0.5);
  r.add("count", "3");
  ReportTable t;
  t.title = "cells";
  t.columns = {"m", "value"};
  t.rows = {{"1", "0.25"}, {"2", "0.125"}};
  r.tables.push_back(t);
  r.notes.push_back("a note");
  const fs::path a = tmp.path / "a.txt";
  const fs::path b = tmp.path / "b.txt";
  write_report(r, a.string());
  write_report(r, b.string());
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  const std::string kv = slurp(tmp.path / "a.kv");
  CHECK(kv.find("alpha = 0.5") != std::string::npos);
  CHECK(kv.find("cells.0.value = 0.25") != std::string::npos);
}

TEST_CASE("fmt_double is deterministic text") {
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(0.0) == "0");
  CHECK(fmt_double(1e-12) == "1e-12");
}

TEST_CASE("run_config executes jobs end to end") {
  TempDir tmp;
  const std::string text =
      "[shift X]\n"
      "matrix = 1 1 ; 1 0\n"
      "[job info]\n"
      "op = shift_info\n"
      "shift = X\n"
      "depth = 4\n"
      "out = " + (tmp.path / "info.txt").string() + "\n";
  const Config cfg = parse_config_text(text, "inline");
  std::ostringstream log;
  const int failures = run_config(cfg, RunOptions{}, log);
  CHECK(failures == 0);
  CHECK(fs::exists(tmp.path / "info.txt"));
  CHECK(fs::exists(tmp.path / "info.kv"));
  CHECK(log.str().find("job info: ok") != std::string::npos);
}

TEST_CASE("job filters select and unknown ops fail cleanly") {
  TempDir tmp;
  const std::string text =
      "[shift X]\n"
      "alphabet = 2\n"
      "[job good]\n"
      "op = shift_info\n"
      "shift = X\n"
      "out = " + (tmp.path / "good.txt").string() + "\n"
      "[job bad]\n"
      "op = no_such_op\n"
      "out = " + (tmp.path / "bad.txt").string() + "\n";
  const Config cfg = parse_config_text(text, "inline");
  std::ostringstream log;
  CHECK(run_config(cfg, RunOptions{}, log) == 1);
  RunOptions only_good;
  only_good.job_filter = {"good"};
  CHECK(run_config(cfg, only_good, log) == 0);
}

TEST_CASE("rational mode rejects float-only constructions") {
  const std::string text =
      "[shift X]\n"
      "alphabet = 2\n"
      "[potential c]\n"
      "shift = X\n"
      "family = cocycle\n"
      "t = 1\n"
      "matrices = 2 1 , 1 1 ; 1 1 , 1 2\n"
      "[job v]\n"
      "op = variation_check\n"
      "potential = c\n"
      "out = unused.txt\n";
  const Config cfg = parse_config_text(text, "inline");
  RunOptions opt;
  opt.force_rational = true;
  std::ostringstream log;
  CHECK(run_config(cfg, opt, log) == 1);
  CHECK(log.str().find("rational") != std::string::npos);
}

TEST_CASE("circular definitions are reported") {
  const std::string text =
      "[shift X]\n"
      "alphabet = 2\n"
      "[factor m]\n"
      "source = X\n"
      "target = X\n"
      "map = 0 1\n"
      "[potential a]\n"
      "family = relative\n"
      "map = m\n"
      "target = a\n"
      "[job j]\n"
      "op = variation_check\n"
      "potential = a\n"
      "out = unused.txt\n";
  const Config cfg = parse_config_text(text, "inline");
  std::ostringstream log;
  CHECK(run_config(cfg, RunOptions{}, log) == 1);
  CHECK(log.str().find("circular") != std::string::npos);
}
