#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "irsched/core.hpp"
#include "irsched/linalg.hpp"

namespace irsched::channel {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct ArrayShape {
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::size_t count() const { return rows * cols; }
  bool operator==(const ArrayShape&) const = default;
};

/// One Monte Carlo drop: geometry, array sizes, power/noise parameters and
/// the RNG seed. Defaults follow the full-scale urban-microcell profile.
struct Scenario {
  double cell_radius_m = 167.0;
  double fov_deg = 120.0;  // gNB field of view; the sector spans [0, fov_deg]
  Vec2 gnb_pos{0.0, 0.0};
  Vec2 irs_pos{75.0, 100.0};
  std::size_t num_ues = 100;
  ArrayShape gnb_array{8, 8};   // UPA
  std::size_t ue_antennas = 2;  // ULA
  ArrayShape irs_array{40, 80};
  double tx_power_dbm = 33.0;
  double noise_psd_dbm_hz = -174.0;
  double bandwidth_hz = 1e8;
  // Never stated by the source system profile; narrowband mmWave default,
  // surfaced prominently in run summaries.
  double carrier_hz = 28e9;
  std::size_t n_clusters = 4;
  std::size_t n_rays = 10;
  double angular_spread_deg = 5.0;
  double pathloss_exponent_nlos = 3.19;
  double height_offset_m = 0.0;  // IRS height above the 2-D plane
  std::uint64_t seed = 1;

  std::vector<Vec2> ue_positions;  // filled by generate_scenario

  std::size_t irs_elements() const { return irs_array.count(); }
  std::size_t gnb_antennas() const { return gnb_array.count(); }
};

/// Channel matrices plus the two power levels entering the SNR.
struct ChannelSet {
  linalg::ComplexMatrix h;              // N_I x N_g, gNB -> IRS (LoS, rank 1)
  std::vector<linalg::ComplexMatrix> g; // per UE, N_U x N_I, IRS -> UE (NLoS)
  double noise_power = 0.0;             // watts
  double signal_power = 0.0;            // watts

  Powers powers() const { return {signal_power, noise_power}; }
};

/// Draws the UE positions uniformly over the circular sector. Deterministic
/// given the seed.
Scenario generate_scenario(Scenario config);

/// Half-wavelength UPA response, entry (r, c) = e^{j pi (r sin_el + c sin_az cos_el)},
/// row-major, length rows*cols.
std::vector<linalg::Complex> steering_vector_upa(std::size_t rows, std::size_t cols,
                                                 double azimuth, double elevation);

/// Free-space (Friis) power gain (lambda / 4 pi d)^2.
double free_space_gain(double distance_m, double carrier_hz);

/// NLoS power gain: free-space at 1 m reference, then d^-alpha.
double nlos_gain(double distance_m, double carrier_hz, double alpha);

ChannelSet build_channels(const Scenario& sc);

}  // namespace irsched::channel
