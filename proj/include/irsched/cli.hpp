#pragma once

#include <string>
#include <vector>

#include "irsched/config.hpp"

namespace irsched::cli {

/// Full command-line entry point. Returns the process exit status:
/// 0 success, 1 runtime failure, 2 configuration error.
int run_cli(const std::vector<std::string>& args);

/// Re-derives every row of a previously written per-drop CSV from its logged
/// seed and compares the formatted fields byte for byte. Returns the number
/// of mismatching rows.
int audit_csv(const RunConfig& cfg, const std::string& csv_path,
              std::vector<std::string>* messages = nullptr);

}  // namespace irsched::cli
