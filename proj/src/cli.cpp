#include "irsched/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "irsched/eval.hpp"
#include "irsched/parallel.hpp"
#include "irsched/rng.hpp"

namespace irsched::cli {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

clustering::Policy policy_from_name(const std::string& name) {
  for (clustering::Policy p :
       {clustering::Policy::CWC, clustering::Policy::OSCWC, clustering::Policy::KM,
        clustering::Policy::HC, clustering::Policy::RANDOM,
        clustering::Policy::UNCLUSTERED})
    if (clustering::policy_name(p) == name) return p;
  throw std::runtime_error("unknown policy name '" + name + "'");
}

std::string per_ue_csv(const std::vector<eval::SweepRow>& rows) {
  std::ostringstream os;
  os << "policy,Z,bits,drop,ue,rate\n";
  for (const auto& row : rows)
    for (std::size_t k = 0; k < row.report.per_ue_rate.size(); ++k)
      os << clustering::policy_name(row.report.policy) << ',' << row.report.z << ','
         << row.bits << ',' << row.drop << ',' << k << ','
         << eval::format_number(row.report.per_ue_rate[k]) << '\n';
  return os.str();
}

int run_experiment(const RunConfig& cfg) {
  eval::SweepConfig sw = sweep_config(cfg);
  std::vector<eval::SweepRow> rows;
  std::string stem;
  switch (cfg.experiment) {
    case Experiment::SweepZ:
      rows = eval::sweep_z(cfg.scenario, sw);
      stem = "sweep_z";
      break;
    case Experiment::SweepIrsSize:
      rows = eval::sweep_irs_size(cfg.scenario, sw);
      stem = "sweep_irs_size";
      break;
    case Experiment::SweepQuantization:
      rows = eval::sweep_quantization(cfg.scenario, sw);
      stem = "sweep_quantization";
      break;
    case Experiment::Single:
      sw.drops = 1;
      rows = eval::sweep_z(cfg.scenario, sw);
      stem = "single";
      break;
  }

  fs::create_directories(cfg.out_dir);
  write_file(fs::path(cfg.out_dir) / (stem + ".csv"), eval::rows_to_csv(rows));
  write_file(fs::path(cfg.out_dir) / (stem + "_aggregate.csv"),
             eval::aggregate_csv(rows));
  std::string summary = eval::summary_text(cfg.scenario, rows);
  write_file(fs::path(cfg.out_dir) / "summary.txt", summary);
  if (cfg.experiment == Experiment::Single)
    write_file(fs::path(cfg.out_dir) / "per_ue.csv", per_ue_csv(rows));

  std::cout << "experiment: " << experiment_name(cfg.experiment) << "\n"
            << summary << "output: " << cfg.out_dir << "/" << stem << ".csv\n";
  return 0;
}

}  // namespace

int audit_csv(const RunConfig& cfg, const std::string& csv_path,
              std::vector<std::string>* messages) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open audit input '" + csv_path + "'");
  std::string header;
  std::getline(in, header);
  const std::string expected =
      "policy,Z,bits,irs_rows,irs_cols,drop,seed,mean_rate,sum_rate,reconfigs";
  if (header != expected)
    throw std::runtime_error("audit input has an unexpected header");

  eval::SweepConfig sw = sweep_config(cfg);
  int mismatches = 0;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 10) throw std::runtime_error("audit: malformed row " + std::to_string(line_no));

    clustering::Policy policy = policy_from_name(f[0]);
    std::size_t z = std::stoull(f[1]);
    int bits = std::stoi(f[2]);

    channel::Scenario sc = cfg.scenario;
    sc.irs_array = {std::stoull(f[3]), std::stoull(f[4])};
    sc.seed = std::stoull(f[6]);
    sc = channel::generate_scenario(sc);
    channel::ChannelSet cs = channel::build_channels(sc);

    irsopt::OptimizeParams opt = sw.opt_params;
    opt.bits = bits;
    auto links = irsopt::optimize_all_ues(cs, opt, Exec::Parallel);
    clustering::ClusterParams params = sw.cluster_params;
    params.quant_bits = bits;
    clustering::ClusteringOutcome out =
        eval::run_policy(policy, links, z, cs.powers(), params, sc.seed, sw.km_params);
    eval::RateReport rep = eval::frame_sum_rate(out, links, cs.powers(), sc.seed);

    bool ok = eval::format_number(rep.mean_rate) == f[7] &&
              eval::format_number(rep.sum_rate) == f[8] &&
              std::to_string(rep.num_reconfigurations) == f[9];
    if (!ok) {
      ++mismatches;
      if (messages)
        messages->push_back("row " + std::to_string(line_no) + ": recomputed " +
                            eval::format_number(rep.mean_rate) + "," +
                            eval::format_number(rep.sum_rate) + "," +
                            std::to_string(rep.num_reconfigurations) + " vs logged " +
                            f[7] + "," + f[8] + "," + f[9]);
    }
  }
  return mismatches;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"IRS-assisted TDMA downlink scheduling simulator"};
  app.allow_extras(false);

  std::string config_path, experiment, z_list, bits_list, out_dir, audit_path, seed_str;
  long long drops = -1;
  int workers = -1;
  std::vector<std::string> overrides;

  app.add_option("--config", config_path, "configuration file (key = value lines)");
  app.add_option("--experiment", experiment,
                 "sweep-z | sweep-irs-size | sweep-quantization | single");
  app.add_option("--Z", z_list, "comma-separated reconfiguration budgets");
  app.add_option("--bits", bits_list, "comma-separated bit depths, 'cont' for continuous");
  app.add_option("--drops", drops, "Monte Carlo channel drops");
  app.add_option("--seed", seed_str, "master seed (unsigned 64-bit)");
  app.add_option("--workers", workers, "worker threads (0 = all cores)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--audit", audit_path, "verify a previously written per-drop CSV");
  app.add_option("overrides", overrides, "key=value configuration overrides");

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  storage.insert(storage.begin(), "irsched");
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  RunConfig cfg = desk_default();
  try {
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    // named flags and positional overrides win over file values
    if (!experiment.empty()) apply_override(cfg, "experiment=" + experiment);
    if (!z_list.empty()) apply_override(cfg, "z_values=" + z_list);
    if (!bits_list.empty()) apply_override(cfg, "b_values=" + bits_list);
    if (drops >= 0) apply_override(cfg, "drops=" + std::to_string(drops));
    if (!seed_str.empty()) apply_override(cfg, "seed=" + seed_str);
    if (workers >= 0) apply_override(cfg, "workers=" + std::to_string(workers));
    if (!out_dir.empty()) apply_override(cfg, "out=" + out_dir);
    for (const std::string& o : overrides) apply_override(cfg, o);
    finalize_defaults(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error";
    if (e.line > 0) std::cerr << " at line " << e.line;
    std::cerr << ": " << e.what() << "\n";
    return 2;
  }

  std::vector<std::string> diagnostics = validate(cfg);
  if (!diagnostics.empty()) {
    for (const std::string& d : diagnostics) std::cerr << "invalid config: " << d << "\n";
    return 2;
  }

  set_threads(cfg.workers > 0 ? cfg.workers : max_threads());

  try {
    if (!audit_path.empty()) {
      std::vector<std::string> messages;
      int bad = audit_csv(cfg, audit_path, &messages);
      for (const std::string& m : messages) std::cerr << "audit mismatch: " << m << "\n";
      std::cout << "audit: " << (bad == 0 ? "all rows reproduced" : "FAILED") << "\n";
      return bad == 0 ? 0 : 1;
    }
    return run_experiment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace irsched::cli
