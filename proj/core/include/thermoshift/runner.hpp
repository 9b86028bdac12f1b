#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "thermoshift/config.hpp"

namespace thermoshift {

struct RunOptions {
  std::vector<std::string> job_filter;  // empty runs every job
  std::optional<size_t> cap_override;
  bool force_rational = false;
};

/// Executes the config's jobs in order, one report file per job, one summary
/// line per job on `out`.  Returns the number of failed jobs.
int run_config(const Config& cfg, const RunOptions& opt, std::ostream& out);

}  // namespace thermoshift
