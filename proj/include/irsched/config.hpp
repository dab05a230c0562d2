#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "irsched/channel.hpp"
#include "irsched/clustering.hpp"
#include "irsched/eval.hpp"
#include "irsched/irs_opt.hpp"

namespace irsched::cli {

enum class Experiment { SweepZ, SweepIrsSize, SweepQuantization, Single };

std::string experiment_name(Experiment e);

/// Raised on malformed configuration input; carries the offending line (0
/// when not file-based) and key (empty when unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line_no, std::string key_name)
      : std::runtime_error(what), line(line_no), key(std::move(key_name)) {}
  int line;
  std::string key;
};

struct RunConfig {
  channel::Scenario scenario;
  Experiment experiment = Experiment::SweepZ;
  std::vector<clustering::Policy> policies{
      clustering::Policy::CWC,    clustering::Policy::OSCWC,
      clustering::Policy::KM,     clustering::Policy::HC,
      clustering::Policy::RANDOM, clustering::Policy::UNCLUSTERED};
  std::vector<std::size_t> z_values;  // empty: derived from K
  std::vector<int> b_values{0};       // 0 = continuous ("cont")
  std::vector<int> b_invalid;         // rejected literals, surfaced by validate
  std::vector<channel::ArrayShape> irs_sizes{{4, 8}, {8, 16}, {10, 20}};
  std::size_t drops = 5;
  std::string out_dir = "out";
  int workers = 0;  // 0: all hardware threads
  irsopt::QuantMode quant_mode = irsopt::QuantMode::InLoop;
  bool pin_seeds = false;
  bool km_circular = false;
};

/// Desk-scale profile: K = 50, 10x20 IRS, 5 drops, full policy set.
RunConfig desk_default();

/// Eleven budget values spread over [1, K].
std::vector<std::size_t> default_z_values(std::size_t k);

/// Applies a "key = value" configuration file ('#' comments, optional
/// [section] headers). Unknown keys raise ConfigError with the line number.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Applies a single "key=value" override; unknown keys raise ConfigError.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Fills derived defaults (Z list from K) after all overrides landed.
void finalize_defaults(RunConfig& cfg);

/// All constraint violations, empty when the configuration is runnable.
/// Never mutates the configuration.
std::vector<std::string> validate(const RunConfig& cfg);

/// SweepConfig view of the run configuration.
eval::SweepConfig sweep_config(const RunConfig& cfg);

}  // namespace irsched::cli
