#include "irsched/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace irsched::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

double parse_double(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value '" + v + "' for key '" + key + "'", line, key);
  }
}

long long parse_int(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer value '" + v + "' for key '" + key + "'", line, key);
  }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid unsigned value '" + v + "' for key '" + key + "'", line, key);
  }
}

bool parse_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("invalid boolean value '" + v + "' for key '" + key + "'", line, key);
}

clustering::Policy parse_policy(const std::string& v, int line) {
  if (v == "cwc") return clustering::Policy::CWC;
  if (v == "oscwc") return clustering::Policy::OSCWC;
  if (v == "km") return clustering::Policy::KM;
  if (v == "hc") return clustering::Policy::HC;
  if (v == "random") return clustering::Policy::RANDOM;
  if (v == "unclustered") return clustering::Policy::UNCLUSTERED;
  throw ConfigError("unknown policy '" + v + "'", line, "policies");
}

channel::ArrayShape parse_shape(const std::string& v, const std::string& key, int line) {
  auto parts = split(v, 'x');
  if (parts.size() != 2)
    throw ConfigError("expected ROWSxCOLS, got '" + v + "' for key '" + key + "'", line, key);
  channel::ArrayShape s;
  s.rows = static_cast<std::size_t>(parse_u64(parts[0], key, line));
  s.cols = static_cast<std::size_t>(parse_u64(parts[1], key, line));
  return s;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
  channel::Scenario& sc = cfg.scenario;
  if (key == "cell_radius") sc.cell_radius_m = parse_double(value, key, line);
  else if (key == "fov_deg") sc.fov_deg = parse_double(value, key, line);
  else if (key == "gnb_x") sc.gnb_pos.x = parse_double(value, key, line);
  else if (key == "gnb_y") sc.gnb_pos.y = parse_double(value, key, line);
  else if (key == "irs_x") sc.irs_pos.x = parse_double(value, key, line);
  else if (key == "irs_y") sc.irs_pos.y = parse_double(value, key, line);
  else if (key == "num_ues") sc.num_ues = static_cast<std::size_t>(parse_u64(value, key, line));
  else if (key == "gnb_rows") sc.gnb_array.rows = static_cast<std::size_t>(parse_u64(value, key, line));
  else if (key == "gnb_cols") sc.gnb_array.cols = static_cast<std::size_t>(parse_u64(value, key, line));
  else if (key == "ue_antennas") sc.ue_antennas = static_cast<std::size_t>(parse_u64(value, key, line));
  else if (key == "irs_rows") sc.irs_array.rows = static_cast<std::size_t>(parse_u64(value, key, line));
  else if (key == "irs_cols") sc.irs_array.cols = static_cast<std::size_t>(parse_u64(value, key, line));
  else if (key == "tx_power_dbm") sc.tx_power_dbm = parse_double(value, key, line);
  else if (key == "noise_psd_dbm_hz") sc.noise_psd_dbm_hz = parse_double(value, key, line);
  else if (key == "bandwidth_hz") sc.bandwidth_hz = parse_double(value, key, line);
  else if (key == "carrier_hz") sc.carrier_hz = parse_double(value, key, line);
  else if (key == "n_clusters") sc.n_clusters = static_cast<std::size_t>(parse_u64(value, key, line));
  else if (key == "n_rays") sc.n_rays = static_cast<std::size_t>(parse_u64(value, key, line));
  else if (key == "angular_spread_deg") sc.angular_spread_deg = parse_double(value, key, line);
  else if (key == "pathloss_exponent_nlos") sc.pathloss_exponent_nlos = parse_double(value, key, line);
  else if (key == "height_offset_m") sc.height_offset_m = parse_double(value, key, line);
  else if (key == "seed") sc.seed = parse_u64(value, key, line);
  else if (key == "experiment") {
    if (value == "sweep-z") cfg.experiment = Experiment::SweepZ;
    else if (value == "sweep-irs-size") cfg.experiment = Experiment::SweepIrsSize;
    else if (value == "sweep-quantization") cfg.experiment = Experiment::SweepQuantization;
    else if (value == "single") cfg.experiment = Experiment::Single;
    else throw ConfigError("unknown experiment '" + value + "'", line, key);
  } else if (key == "policies") {
    cfg.policies.clear();
    if (value == "all") {
      cfg.policies = {clustering::Policy::CWC,    clustering::Policy::OSCWC,
                      clustering::Policy::KM,     clustering::Policy::HC,
                      clustering::Policy::RANDOM, clustering::Policy::UNCLUSTERED};
    } else {
      for (const std::string& tok : split(value, ','))
        cfg.policies.push_back(parse_policy(tok, line));
    }
  } else if (key == "z_values") {
    cfg.z_values.clear();
    for (const std::string& tok : split(value, ','))
      cfg.z_values.push_back(static_cast<std::size_t>(parse_u64(tok, key, line)));
  } else if (key == "b_values") {
    cfg.b_values.clear();
    cfg.b_invalid.clear();
    for (const std::string& tok : split(value, ',')) {
      if (tok == "cont" || tok == "continuous") {
        cfg.b_values.push_back(0);
      } else {
        long long b = parse_int(tok, key, line);
        if (b < 1)
          cfg.b_invalid.push_back(static_cast<int>(b));
        else
          cfg.b_values.push_back(static_cast<int>(b));
      }
    }
  } else if (key == "irs_sizes") {
    cfg.irs_sizes.clear();
    for (const std::string& tok : split(value, ','))
      cfg.irs_sizes.push_back(parse_shape(tok, key, line));
  } else if (key == "drops") {
    cfg.drops = static_cast<std::size_t>(parse_u64(value, key, line));
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "workers") {
    cfg.workers = static_cast<int>(parse_int(value, key, line));
  } else if (key == "quantize_mode") {
    if (value == "in-loop") cfg.quant_mode = irsopt::QuantMode::InLoop;
    else if (value == "post-hoc") cfg.quant_mode = irsopt::QuantMode::PostHoc;
    else throw ConfigError("unknown quantize_mode '" + value + "'", line, key);
  } else if (key == "pin_seeds") {
    cfg.pin_seeds = parse_bool(value, key, line);
  } else if (key == "km_circular") {
    cfg.km_circular = parse_bool(value, key, line);
  } else {
    throw ConfigError("unknown key '" + key + "'", line, key);
  }
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::SweepZ: return "sweep-z";
    case Experiment::SweepIrsSize: return "sweep-irs-size";
    case Experiment::SweepQuantization: return "sweep-quantization";
    case Experiment::Single: return "single";
  }
  return "?";
}

RunConfig desk_default() {
  RunConfig cfg;
  cfg.scenario.num_ues = 50;
  cfg.scenario.irs_array = {10, 20};
  cfg.drops = 5;
  return cfg;
}

std::vector<std::size_t> default_z_values(std::size_t k) {
  std::vector<std::size_t> zs{1};
  for (int i = 1; i <= 10; ++i) {
    std::size_t z = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(i * k) / 10.0)));
    if (z != zs.back()) zs.push_back(z);
  }
  return zs;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0, "");
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed section header '" + raw + "'", line_no, "");
      std::string section = trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "run")
        throw ConfigError("unknown section '" + section + "'", line_no, section);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value', got '" + raw + "'", line_no, "");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("empty key in '" + raw + "'", line_no, "");
    set_key(cfg, key, value, line_no);
  }
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like key=value, got '" + assignment + "'", 0, "");
  set_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), 0);
}

void finalize_defaults(RunConfig& cfg) {
  if (cfg.z_values.empty()) cfg.z_values = default_z_values(cfg.scenario.num_ues);
}

std::vector<std::string> validate(const RunConfig& cfg) {
  std::vector<std::string> out;
  const std::size_t k = cfg.scenario.num_ues;
  if (!(cfg.scenario.cell_radius_m > 0.0))
    out.push_back("cell_radius: must be > 0");
  if (!(cfg.scenario.fov_deg > 0.0 && cfg.scenario.fov_deg <= 360.0))
    out.push_back("fov_deg: must lie in (0, 360]");
  if (k < 1) out.push_back("num_ues: must be >= 1");
  if (cfg.scenario.irs_array.count() < 1) out.push_back("irs_rows/irs_cols: must be >= 1");
  if (cfg.scenario.gnb_array.count() < 1) out.push_back("gnb_rows/gnb_cols: must be >= 1");
  if (cfg.scenario.ue_antennas < 1) out.push_back("ue_antennas: must be >= 1");
  if (cfg.z_values.empty()) out.push_back("z_values: empty");
  for (std::size_t z : cfg.z_values)
    if (z < 1 || z > k)
      out.push_back("z_values: " + std::to_string(z) +
                    " violates the block-static constraint 1 <= Z <= K (K = " +
                    std::to_string(k) + ")");
  if (cfg.drops < 1) out.push_back("drops: must be >= 1");
  for (int b : cfg.b_invalid)
    out.push_back("b_values: " + std::to_string(b) +
                  " rejected, the quantizer requires b > 0 (use 'cont' for continuous)");
  if (cfg.policies.empty()) out.push_back("policies: empty");
  if (cfg.experiment == Experiment::SweepQuantization && cfg.b_values.empty())
    out.push_back("b_values: empty but experiment is sweep-quantization");
  if (cfg.experiment == Experiment::SweepIrsSize && cfg.irs_sizes.empty())
    out.push_back("irs_sizes: empty but experiment is sweep-irs-size");
  for (const auto& s : cfg.irs_sizes)
    if (s.count() < 1) out.push_back("irs_sizes: zero-element panel");
  if (cfg.workers < 0) out.push_back("workers: must be >= 0");
  return out;
}

eval::SweepConfig sweep_config(const RunConfig& cfg) {
  eval::SweepConfig sw;
  sw.policies = cfg.policies;
  sw.z_values = cfg.z_values;
  sw.b_values = cfg.b_values;
  sw.irs_sizes = cfg.irs_sizes;
  sw.drops = cfg.drops;
  sw.opt_params.mode = cfg.quant_mode;
  sw.cluster_params.pin_seeds = cfg.pin_seeds;
  sw.km_params.circular_distance = cfg.km_circular;
  sw.exec = cfg.workers == 1 ? Exec::Serial : Exec::Parallel;
  return sw;
}

}  // namespace irsched::cli
