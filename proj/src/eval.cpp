#include "irsched/eval.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "irsched/rng.hpp"

namespace irsched::eval {

namespace {

std::vector<IrsConfiguration> points_of(const std::vector<UeLink>& links) {
  std::vector<IrsConfiguration> pts;
  pts.reserve(links.size());
  for (const auto& l : links) pts.push_back(l.phi_star);
  return pts;
}

std::uint64_t policy_seed(std::uint64_t drop_seed, Policy policy, std::size_t z) {
  return split_seed(drop_seed,
                    (static_cast<std::uint64_t>(policy) << 40) + static_cast<std::uint64_t>(z));
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

RateReport frame_sum_rate(const ClusteringOutcome& outcome,
                          const std::vector<UeLink>& links, const Powers& powers,
                          std::uint64_t seed) {
  const std::size_t k_total = links.size();
  if (outcome.assignment.size() != k_total)
    throw std::invalid_argument("frame_sum_rate: assignment does not cover the UEs");
  for (std::size_t c : outcome.assignment)
    if (c >= outcome.centroids.size())
      throw std::invalid_argument("frame_sum_rate: assignment references a missing centroid");
  for (const auto& c : outcome.centroids)
    if (!links.empty() && c.size() != links.front().coeff.size())
      throw std::invalid_argument("frame_sum_rate: centroid dimension mismatch");

  RateReport rep;
  rep.policy = outcome.policy;
  rep.z = outcome.centroids.size();
  rep.seed = seed;
  rep.per_ue_rate.resize(k_total);
  for (std::size_t k = 0; k < k_total; ++k) {
    double gamma =
        irsopt::link_snr(links[k], outcome.centroids[outcome.assignment[k]], powers);
    rep.per_ue_rate[k] = std::log2(1.0 + gamma);
    rep.sum_rate += rep.per_ue_rate[k];
  }
  rep.mean_rate = rep.sum_rate / static_cast<double>(k_total);

  // Clusters are served back to back, so the schedule loads one
  // configuration per non-empty cluster.
  std::vector<char> used(outcome.centroids.size(), 0);
  for (std::size_t c : outcome.assignment) used[c] = 1;
  for (char u : used) rep.num_reconfigurations += u;
  return rep;
}

ClusteringOutcome run_policy(Policy policy, const std::vector<UeLink>& links,
                             std::size_t z, const Powers& powers,
                             const clustering::ClusterParams& params,
                             std::uint64_t drop_seed,
                             const clustering::KmParams& km_params) {
  switch (policy) {
    case Policy::CWC:
      return clustering::cwc(links, z, powers, params);
    case Policy::OSCWC:
      return clustering::oscwc(links, z, powers, params.exec);
    case Policy::KM:
      return clustering::kmeans(points_of(links), z, policy_seed(drop_seed, policy, z),
                                 km_params);
    case Policy::HC:
      return clustering::hier_agglomerative(points_of(links), z);
    case Policy::RANDOM:
      return clustering::random_clustering(points_of(links), z,
                                           policy_seed(drop_seed, policy, z));
    case Policy::UNCLUSTERED:
      return clustering::unclustered(links);
  }
  throw std::logic_error("run_policy: unknown policy");
}

namespace {

struct DropData {
  std::uint64_t seed = 0;
  std::vector<UeLink> links;
  Powers powers;
};

DropData prepare_drop(const channel::Scenario& base, std::size_t drop,
                      const irsopt::OptimizeParams& opt, Exec inner) {
  channel::Scenario sc = base;
  sc.seed = split_seed(base.seed, drop);
  sc = channel::generate_scenario(sc);
  channel::ChannelSet cs = channel::build_channels(sc);
  DropData d;
  d.seed = sc.seed;
  d.powers = cs.powers();
  d.links = irsopt::optimize_all_ues(cs, opt, inner);
  return d;
}

}  // namespace

std::vector<SweepRow> sweep_z(const channel::Scenario& base, const SweepConfig& cfg) {
  if (cfg.drops < 1) throw std::invalid_argument("sweep_z: drops must be >= 1");
  const std::size_t n_pol = cfg.policies.size();
  const std::size_t n_z = cfg.z_values.size();
  std::vector<SweepRow> rows(cfg.drops * n_pol * n_z);

  const Exec outer = cfg.drops > 1 ? cfg.exec : Exec::Serial;
  const Exec inner = cfg.drops > 1 ? Exec::Serial : cfg.exec;

  run_indexed(
      cfg.drops,
      [&](std::size_t d) {
        DropData drop = prepare_drop(base, d, cfg.opt_params, inner);
        clustering::ClusterParams params = cfg.cluster_params;
        params.exec = inner;
        for (std::size_t pi = 0; pi < n_pol; ++pi) {
          for (std::size_t zi = 0; zi < n_z; ++zi) {
            ClusteringOutcome out =
                run_policy(cfg.policies[pi], drop.links, cfg.z_values[zi], drop.powers,
                           params, drop.seed, cfg.km_params);
            SweepRow& row = rows[(d * n_pol + pi) * n_z + zi];
            row.report = frame_sum_rate(out, drop.links, drop.powers, drop.seed);
            row.bits = cfg.opt_params.bits;
            row.irs_rows = base.irs_array.rows;
            row.irs_cols = base.irs_array.cols;
            row.drop = d;
          }
        }
      },
      outer);
  return rows;
}

std::vector<SweepRow> sweep_irs_size(const channel::Scenario& base,
                                     const SweepConfig& cfg) {
  if (cfg.irs_sizes.empty())
    throw std::invalid_argument("sweep_irs_size: no IRS sizes given");
  const std::size_t n_z = cfg.z_values.size();
  const std::size_t n_sizes = cfg.irs_sizes.size();
  const std::size_t tasks = n_sizes * cfg.drops;
  std::vector<SweepRow> rows(tasks * n_z);

  const Exec outer = tasks > 1 ? cfg.exec : Exec::Serial;
  const Exec inner = tasks > 1 ? Exec::Serial : cfg.exec;

  run_indexed(
      tasks,
      [&](std::size_t t) {
        const std::size_t si = t / cfg.drops;
        const std::size_t d = t % cfg.drops;
        channel::Scenario sc = base;
        sc.irs_array = cfg.irs_sizes[si];
        DropData drop = prepare_drop(sc, d, cfg.opt_params, inner);
        clustering::ClusterParams params = cfg.cluster_params;
        params.exec = inner;
        for (std::size_t zi = 0; zi < n_z; ++zi) {
          ClusteringOutcome out = run_policy(Policy::CWC, drop.links, cfg.z_values[zi],
                                             drop.powers, params, drop.seed);
          SweepRow& row = rows[t * n_z + zi];
          row.report = frame_sum_rate(out, drop.links, drop.powers, drop.seed);
          row.bits = cfg.opt_params.bits;
          row.irs_rows = cfg.irs_sizes[si].rows;
          row.irs_cols = cfg.irs_sizes[si].cols;
          row.drop = d;
        }
      },
      outer);
  return rows;
}

std::vector<SweepRow> sweep_quantization(const channel::Scenario& base,
                                         const SweepConfig& cfg) {
  if (cfg.b_values.empty())
    throw std::invalid_argument("sweep_quantization: no quantization levels given");
  const std::size_t n_z = cfg.z_values.size();
  const std::size_t n_b = cfg.b_values.size();
  const std::size_t tasks = n_b * cfg.drops;
  std::vector<SweepRow> rows(tasks * n_z);

  const Exec outer = tasks > 1 ? cfg.exec : Exec::Serial;
  const Exec inner = tasks > 1 ? Exec::Serial : cfg.exec;

  run_indexed(
      tasks,
      [&](std::size_t t) {
        const std::size_t bi = t / cfg.drops;
        const std::size_t d = t % cfg.drops;
        irsopt::OptimizeParams opt = cfg.opt_params;
        opt.bits = cfg.b_values[bi];
        DropData drop = prepare_drop(base, d, opt, inner);
        clustering::ClusterParams params = cfg.cluster_params;
        params.exec = inner;
        params.quant_bits = opt.bits;
        for (std::size_t zi = 0; zi < n_z; ++zi) {
          ClusteringOutcome out = run_policy(Policy::CWC, drop.links, cfg.z_values[zi],
                                             drop.powers, params, drop.seed);
          SweepRow& row = rows[t * n_z + zi];
          row.report = frame_sum_rate(out, drop.links, drop.powers, drop.seed);
          row.bits = opt.bits;
          row.irs_rows = base.irs_array.rows;
          row.irs_cols = base.irs_array.cols;
          row.drop = d;
        }
      },
      outer);
  return rows;
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "policy,Z,bits,irs_rows,irs_cols,drop,seed,mean_rate,sum_rate,reconfigs\n";
  for (const SweepRow& r : rows) {
    os << clustering::policy_name(r.report.policy) << ',' << r.report.z << ','
       << r.bits << ',' << r.irs_rows << ',' << r.irs_cols << ',' << r.drop << ','
       << r.report.seed << ',' << format_number(r.report.mean_rate) << ','
       << format_number(r.report.sum_rate) << ',' << r.report.num_reconfigurations
       << '\n';
  }
  return os.str();
}

namespace {

struct AggKey {
  Policy policy;
  std::size_t z;
  int bits;
  std::size_t irs_rows, irs_cols;
  bool operator==(const AggKey&) const = default;
};

struct AggCell {
  AggKey key;
  std::vector<double> mean_rates;
  std::vector<double> sum_rates;
  double reconfigs = 0.0;
};

std::vector<AggCell> aggregate(const std::vector<SweepRow>& rows) {
  std::vector<AggCell> cells;
  for (const SweepRow& r : rows) {
    AggKey key{r.report.policy, r.report.z, r.bits, r.irs_rows, r.irs_cols};
    AggCell* cell = nullptr;
    for (auto& c : cells)
      if (c.key == key) {
        cell = &c;
        break;
      }
    if (!cell) {
      cells.push_back(AggCell{key, {}, {}, 0.0});
      cell = &cells.back();
    }
    cell->mean_rates.push_back(r.report.mean_rate);
    cell->sum_rates.push_back(r.report.sum_rate);
    cell->reconfigs += static_cast<double>(r.report.num_reconfigurations);
  }
  return cells;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string aggregate_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "policy,Z,bits,irs_rows,irs_cols,drops,mean_rate_avg,mean_rate_std,"
        "sum_rate_avg,sum_rate_std,reconfigs_avg\n";
  for (const AggCell& c : aggregate(rows)) {
    os << clustering::policy_name(c.key.policy) << ',' << c.key.z << ',' << c.key.bits
       << ',' << c.key.irs_rows << ',' << c.key.irs_cols << ',' << c.mean_rates.size()
       << ',' << format_number(mean_of(c.mean_rates)) << ','
       << format_number(stddev_of(c.mean_rates)) << ','
       << format_number(mean_of(c.sum_rates)) << ','
       << format_number(stddev_of(c.sum_rates)) << ','
       << format_number(c.reconfigs / static_cast<double>(c.mean_rates.size())) << '\n';
  }
  return os.str();
}

std::string summary_text(const channel::Scenario& scenario,
                         const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "scenario: K=" << scenario.num_ues << "  gNB " << scenario.gnb_array.rows << 'x'
     << scenario.gnb_array.cols << "  IRS " << scenario.irs_array.rows << 'x'
     << scenario.irs_array.cols << "  UE antennas " << scenario.ue_antennas << '\n';
  os << "carrier: " << format_number(scenario.carrier_hz / 1e9)
     << " GHz (configuration default unless overridden)\n";
  os << "tx power: " << scenario.tx_power_dbm
     << " dBm, noise PSD: " << scenario.noise_psd_dbm_hz
     << " dBm/Hz, bandwidth: " << format_number(scenario.bandwidth_hz / 1e6) << " MHz\n";
  os << "master seed: " << scenario.seed << "\n\n";
  os << "policy        Z   bits  IRS      mean rate [bit/slot]   (std)      reconfigs\n";
  for (const AggCell& c : aggregate(rows)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12s %4zu  %4d  %3zux%-3zu  %-20.10g   %-9.4g  %.2f\n",
                  clustering::policy_name(c.key.policy).c_str(), c.key.z, c.key.bits,
                  c.key.irs_rows, c.key.irs_cols, mean_of(c.mean_rates),
                  stddev_of(c.mean_rates),
                  c.reconfigs / static_cast<double>(c.mean_rates.size()));
    os << buf;
  }
  return os.str();
}

}  // namespace irsched::eval
