#include "irsched/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "irsched/rng.hpp"

namespace irsched::channel {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kPi = 3.14159265358979323846;

// RNG stream tags under the scenario seed.
constexpr std::uint64_t kPositionStream = 0x706F73;   // UE placement
constexpr std::uint64_t kUeChannelBase = 0x100000;    // + ue index

double deg2rad(double d) { return d * kPi / 180.0; }

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

double bearing(const Vec2& from, const Vec2& to) {
  return std::atan2(to.y - from.y, to.x - from.x);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void validate(const Scenario& sc) {
  if (!(sc.cell_radius_m > 0.0))
    throw std::invalid_argument("scenario: cell_radius must be > 0");
  if (!(sc.fov_deg > 0.0 && sc.fov_deg <= 360.0))
    throw std::invalid_argument("scenario: fov_deg must lie in (0, 360]");
  if (sc.num_ues < 1) throw std::invalid_argument("scenario: num_ues must be >= 1");
  if (sc.irs_array.count() < 1 || sc.gnb_array.count() < 1 || sc.ue_antennas < 1)
    throw std::invalid_argument("scenario: array sizes must be >= 1");
  if (!(sc.carrier_hz > 0.0)) throw std::invalid_argument("scenario: carrier_hz must be > 0");
  if (!(sc.bandwidth_hz > 0.0))
    throw std::invalid_argument("scenario: bandwidth_hz must be > 0");
  if (sc.n_clusters < 1 || sc.n_rays < 1)
    throw std::invalid_argument("scenario: ray model needs n_clusters, n_rays >= 1");
}

}  // namespace

Scenario generate_scenario(Scenario config) {
  validate(config);
  Rng rng(split_seed(config.seed, kPositionStream));
  config.ue_positions.resize(config.num_ues);
  const double fov = deg2rad(config.fov_deg);
  for (Vec2& p : config.ue_positions) {
    double ang = fov * rng.uniform();
    double r = config.cell_radius_m * std::sqrt(rng.uniform());
    p.x = config.gnb_pos.x + r * std::cos(ang);
    p.y = config.gnb_pos.y + r * std::sin(ang);
  }
  return config;
}

std::vector<linalg::Complex> steering_vector_upa(std::size_t rows, std::size_t cols,
                                                 double azimuth, double elevation) {
  std::vector<linalg::Complex> a(rows * cols);
  const double se = std::sin(elevation);
  const double sa_ce = std::sin(azimuth) * std::cos(elevation);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double phase = kPi * (static_cast<double>(r) * se + static_cast<double>(c) * sa_ce);
      a[r * cols + c] = std::polar(1.0, phase);
    }
  }
  return a;
}

double free_space_gain(double distance_m, double carrier_hz) {
  double lambda = kSpeedOfLight / carrier_hz;
  double amp = lambda / (4.0 * kPi * distance_m);
  return amp * amp;
}

double nlos_gain(double distance_m, double carrier_hz, double alpha) {
  return free_space_gain(1.0, carrier_hz) * std::pow(distance_m, -alpha);
}

ChannelSet build_channels(const Scenario& sc) {
  validate(sc);
  if (sc.ue_positions.size() != sc.num_ues)
    throw std::invalid_argument("build_channels: scenario has no UE positions");

  ChannelSet cs;
  cs.noise_power = dbm_to_watts(sc.noise_psd_dbm_hz) * sc.bandwidth_hz;
  cs.signal_power = dbm_to_watts(sc.tx_power_dbm);

  const std::size_t n_i = sc.irs_elements();
  const std::size_t n_g = sc.gnb_antennas();
  const std::size_t n_u = sc.ue_antennas;

  // gNB boresight along the sector bisector; IRS boresight back at the gNB,
  // which keeps every UE inside the panel's half-space.
  const double gnb_boresight = deg2rad(sc.fov_deg) / 2.0;
  const double irs_boresight = bearing(sc.irs_pos, sc.gnb_pos);

  // H: single LoS path, rank-1 outer product with free-space gain.
  const double d_gi = distance(sc.gnb_pos, sc.irs_pos);
  const double el_gi = std::atan2(sc.height_offset_m, d_gi);
  auto a_gnb = steering_vector_upa(sc.gnb_array.rows, sc.gnb_array.cols,
                                   bearing(sc.gnb_pos, sc.irs_pos) - gnb_boresight, el_gi);
  auto a_irs_gnb = steering_vector_upa(sc.irs_array.rows, sc.irs_array.cols,
                                       bearing(sc.irs_pos, sc.gnb_pos) - irs_boresight,
                                       -el_gi);
  const double los_amp = std::sqrt(free_space_gain(d_gi, sc.carrier_hz));
  cs.h = linalg::ComplexMatrix(n_i, n_g);
  for (std::size_t n = 0; n < n_i; ++n)
    for (std::size_t j = 0; j < n_g; ++j)
      cs.h(n, j) = los_amp * a_irs_gnb[n] * std::conj(a_gnb[j]);

  // Per-UE NLoS channels: clustered rays with complex gaussian gains around
  // the geometric bearing. Normalized so E||G_k||_F^2 = gain * N_U * N_I.
  const double sigma_cluster = deg2rad(sc.angular_spread_deg);
  const double sigma_ray = sigma_cluster / 5.0;
  const std::size_t total_rays = sc.n_clusters * sc.n_rays;

  cs.g.reserve(sc.num_ues);
  for (std::size_t k = 0; k < sc.num_ues; ++k) {
    const Vec2& ue = sc.ue_positions[k];
    const double d_k = distance(sc.irs_pos, ue);
    if (d_k < 1.0)
      throw std::invalid_argument("build_channels: UE " + std::to_string(k) +
                                  " collocated with IRS (distance < 1 m)");

    Rng rng(split_seed(sc.seed, kUeChannelBase + k));
    const double aod_az = bearing(sc.irs_pos, ue) - irs_boresight;
    const double aod_el = -std::atan2(sc.height_offset_m, d_k);
    const double aoa_el = std::atan2(sc.height_offset_m, d_k);

    const double scale = std::sqrt(nlos_gain(d_k, sc.carrier_hz, sc.pathloss_exponent_nlos) /
                                   static_cast<double>(total_rays));

    linalg::ComplexMatrix g(n_u, n_i);
    for (std::size_t c = 0; c < sc.n_clusters; ++c) {
      const double c_aod_az = rng.gaussian() * sigma_cluster;
      const double c_aod_el = rng.gaussian() * sigma_cluster;
      const double c_aoa_az = rng.gaussian() * sigma_cluster;
      const double c_aoa_el = rng.gaussian() * sigma_cluster;
      for (std::size_t r = 0; r < sc.n_rays; ++r) {
        const linalg::Complex gain = rng.complex_gaussian() * scale;
        const double r_aod_az = rng.gaussian() * sigma_ray;
        const double r_aod_el = rng.gaussian() * sigma_ray;
        const double r_aoa_az = rng.gaussian() * sigma_ray;
        const double r_aoa_el = rng.gaussian() * sigma_ray;

        auto a_irs = steering_vector_upa(sc.irs_array.rows, sc.irs_array.cols,
                                         aod_az + c_aod_az + r_aod_az,
                                         aod_el + c_aod_el + r_aod_el);
        auto a_ue = steering_vector_upa(1, n_u, c_aoa_az + r_aoa_az,
                                        aoa_el + c_aoa_el + r_aoa_el);
        for (std::size_t i = 0; i < n_u; ++i) {
          const linalg::Complex gi = gain * a_ue[i];
          for (std::size_t n = 0; n < n_i; ++n) g(i, n) += gi * std::conj(a_irs[n]);
        }
      }
    }
    cs.g.push_back(std::move(g));
  }
  return cs;
}

}  // namespace irsched::channel
