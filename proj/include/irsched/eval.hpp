#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irsched/channel.hpp"
#include "irsched/clustering.hpp"
#include "irsched/core.hpp"
#include "irsched/irs_opt.hpp"
#include "irsched/parallel.hpp"

namespace irsched::eval {

using clustering::ClusteringOutcome;
using clustering::Policy;
using irsopt::UeLink;

/// Frame-level rate outcome for one (policy, Z, drop) cell.
struct RateReport {
  Policy policy = Policy::UNCLUSTERED;
  std::size_t z = 0;
  std::vector<double> per_ue_rate;  // bit/slot, log2(1 + SNR at shared config)
  double sum_rate = 0.0;
  double mean_rate = 0.0;
  std::size_t num_reconfigurations = 0;  // non-empty clusters
  std::uint64_t seed = 0;
};

/// One CSV row: a RateReport plus the sweep context it was produced under.
struct SweepRow {
  RateReport report;
  int bits = 0;  // 0 = continuous phases
  std::size_t irs_rows = 0;
  std::size_t irs_cols = 0;
  std::size_t drop = 0;
};

struct SweepConfig {
  std::vector<Policy> policies{Policy::CWC,    Policy::OSCWC, Policy::KM,
                               Policy::HC,     Policy::RANDOM, Policy::UNCLUSTERED};
  std::vector<std::size_t> z_values;
  std::vector<int> b_values{0};
  std::vector<channel::ArrayShape> irs_sizes;
  std::size_t drops = 20;
  irsopt::OptimizeParams opt_params;
  clustering::ClusterParams cluster_params;
  clustering::KmParams km_params;
  Exec exec = Exec::Parallel;
};

/// Rates of every UE under its cluster's shared configuration, with the
/// reconfiguration count of the cluster-by-cluster TDMA schedule.
RateReport frame_sum_rate(const ClusteringOutcome& outcome,
                          const std::vector<UeLink>& links, const Powers& powers,
                          std::uint64_t seed);

/// Runs one policy at one Z on an already-optimized drop. KM and RANDOM draw
/// their internal randomness from a seed derived only from (drop seed,
/// policy, Z), so any row is reproducible in isolation.
ClusteringOutcome run_policy(Policy policy, const std::vector<UeLink>& links,
                             std::size_t z, const Powers& powers,
                             const clustering::ClusterParams& params,
                             std::uint64_t drop_seed,
                             const clustering::KmParams& km_params = {});

/// Average sum-rate versus the reconfiguration budget Z, one row per
/// (policy, Z, drop). Drop d uses seed split_seed(base.seed, d).
std::vector<SweepRow> sweep_z(const channel::Scenario& base, const SweepConfig& cfg);

/// Z-sweep per IRS panel size, CWC policy.
std::vector<SweepRow> sweep_irs_size(const channel::Scenario& base,
                                     const SweepConfig& cfg);

/// Z-sweep per quantization resolution (bits = 0 means continuous), CWC with
/// quantized per-UE optimization and codebook-projected centroids.
std::vector<SweepRow> sweep_quantization(const channel::Scenario& base,
                                         const SweepConfig& cfg);

/// Per-drop CSV: policy,Z,bits,irs_rows,irs_cols,drop,seed,mean_rate,sum_rate,reconfigs
std::string rows_to_csv(const std::vector<SweepRow>& rows);

/// Aggregate across drops (mean and sample standard deviation), grouped by
/// (policy, Z, bits, irs size) in first-seen order.
std::string aggregate_csv(const std::vector<SweepRow>& rows);

/// Human-readable summary table of the aggregate rates.
std::string summary_text(const channel::Scenario& scenario,
                         const std::vector<SweepRow>& rows);

/// 10 significant digits, the fixed numeric format of every CSV field.
std::string format_number(double x);

}  // namespace irsched::eval
