#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thermoshift/config.hpp"
#include "thermoshift/runner.hpp"

namespace fs = std::filesystem;

namespace {

fs::path examples_dir() {
  if (const char* env = std::getenv("THERMOSHIFT_EXAMPLES"))
    return fs::path(env);
  return fs::path(THERMOSHIFT_EXAMPLES_DIR);
}

int list_examples() {
  const fs::path dir = examples_dir();
  if (!fs::is_directory(dir)) {
    std::cerr << "no example directory at " << dir << "\n";
    return 1;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".cfg") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::string desc;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("# ", 0) == 0) {
        desc = line.substr(2);
        break;
      }
    }
    std::cout << p.filename().string() << "  " << desc << "\n";
    std::cout << "    " << p.string() << "\n";
  }
  return files.empty() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for thermodynamic conditions on subshifts"};
  app.require_subcommand(1);

  std::string config_path;
  std::string jobs;
  long long cap = -1;
  bool rational = false;

  CLI::App* run = app.add_subcommand("run", "execute the jobs of a config file");
  run->add_option("config", config_path, "config file path")->required();
  run->add_option("--jobs", jobs, "comma-separated job names to run");
  run->add_option("--cap-words", cap, "override the enumeration cap");
  run->add_flag("--rational", rational, "force exact arithmetic mode");

  app.add_subcommand("examples", "list the shipped example configs");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("examples")) return list_examples();

  try {
    const thermoshift::Config cfg =
        thermoshift::parse_config_file(config_path);
    thermoshift::RunOptions opt;
    if (!jobs.empty())
      for (const std::string& j : thermoshift::split_list(jobs, ','))
        if (!j.empty()) opt.job_filter.push_back(j);
    if (cap >= 0) opt.cap_override = static_cast<size_t>(cap);
    opt.force_rational = rational;
    return thermoshift::run_config(cfg, opt, std::cout) == 0 ? 0 : 1;
  } catch (const thermoshift::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
