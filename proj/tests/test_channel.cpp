#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "irsched/channel.hpp"
#include "irsched/linalg.hpp"
#include "oracles.hpp"

using namespace irsched;
using namespace irsched::channel;
using linalg::Complex;
using linalg::ComplexMatrix;

namespace {

Scenario desk_scenario() {
  Scenario sc;
  sc.num_ues = 5;
  sc.gnb_array = {2, 2};
  sc.irs_array = {4, 8};
  sc.n_clusters = 2;
  sc.n_rays = 4;
  sc.seed = 77;
  return sc;
}

}  // namespace

TEST_CASE("generate_scenario is deterministic in the seed") {
  Scenario a = generate_scenario(desk_scenario());
  Scenario b = generate_scenario(desk_scenario());
  REQUIRE(a.ue_positions.size() == b.ue_positions.size());
  for (std::size_t k = 0; k < a.ue_positions.size(); ++k) {
    CHECK(a.ue_positions[k].x == b.ue_positions[k].x);
    CHECK(a.ue_positions[k].y == b.ue_positions[k].y);
  }
}

TEST_CASE("UE positions stay inside the sector") {
  Scenario sc = desk_scenario();
  sc.num_ues = 10000;
  sc = generate_scenario(sc);
  for (const Vec2& p : sc.ue_positions) {
    double r = std::hypot(p.x, p.y);
    CHECK(r <= sc.cell_radius_m + 1e-9);
    double ang = std::atan2(p.y, p.x);
    CHECK(ang >= -1e-12);
    CHECK(ang <= sc.fov_deg * 3.14159265358979323846 / 180.0 + 1e-12);
  }
}

TEST_CASE("mean radial position matches the uniform-sector moment") {
  // E[r] over a uniform disk sector of radius R is (2/3) R.
  Scenario sc = desk_scenario();
  sc.num_ues = 10000;
  sc = generate_scenario(sc);
  double mean_r = 0.0;
  for (const Vec2& p : sc.ue_positions) mean_r += std::hypot(p.x, p.y);
  mean_r /= static_cast<double>(sc.num_ues);
  double expected = 2.0 / 3.0 * sc.cell_radius_m;
  CHECK(std::fabs(mean_r - expected) < 0.02 * expected);
}

TEST_CASE("invalid geometry is rejected") {
  Scenario sc = desk_scenario();
  sc.cell_radius_m = 0.0;
  CHECK_THROWS_AS(generate_scenario(sc), std::invalid_argument);
  sc = desk_scenario();
  sc.fov_deg = 0.0;
  CHECK_THROWS_AS(generate_scenario(sc), std::invalid_argument);
  sc = desk_scenario();
  sc.fov_deg = 361.0;
  CHECK_THROWS_AS(generate_scenario(sc), std::invalid_argument);
}

TEST_CASE("steering vector broadside is all ones") {
  auto a = steering_vector_upa(3, 4, 0.0, 0.0);
  REQUIRE(a.size() == 12);
  for (const Complex& e : a) CHECK(std::abs(e - Complex(1, 0)) < 1e-15);
}

TEST_CASE("steering vector endfire two-element case") {
  auto a = steering_vector_upa(1, 2, 3.14159265358979323846 / 2.0, 0.0);
  CHECK(std::abs(a[0] - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(a[1] - std::polar(1.0, 3.14159265358979323846)) < 1e-12);
}

TEST_CASE("steering vector entries are unit modulus") {
  oracle::TestRng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    auto a = steering_vector_upa(2 + rng.below(4), 2 + rng.below(4),
                                 rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
    for (const Complex& e : a) CHECK(std::fabs(std::abs(e) - 1.0) < 1e-12);
  }
}

TEST_CASE("same seed gives identical channel sets") {
  Scenario sc = generate_scenario(desk_scenario());
  ChannelSet a = build_channels(sc);
  ChannelSet b = build_channels(sc);
  CHECK(a.h == b.h);
  REQUIRE(a.g.size() == b.g.size());
  for (std::size_t k = 0; k < a.g.size(); ++k) CHECK(a.g[k] == b.g[k]);
  CHECK(a.noise_power == b.noise_power);
  CHECK(a.signal_power == b.signal_power);
}

TEST_CASE("noise power follows the PSD formula") {
  Scenario sc = generate_scenario(desk_scenario());
  ChannelSet cs = build_channels(sc);
  // -174 dBm/Hz over 100 MHz
  CHECK(cs.noise_power == doctest::Approx(3.981071705534969e-13).epsilon(1e-12));
  CHECK(cs.signal_power == doctest::Approx(1.9952623149688795).epsilon(1e-12));
}

TEST_CASE("H is rank one") {
  Scenario sc = generate_scenario(desk_scenario());
  ChannelSet cs = build_channels(sc);
  auto t = linalg::top_singular_triplet(cs.h);
  // Frobenius norm of the deflated remainder bounds the second singular value.
  double resid = 0.0;
  for (std::size_t n = 0; n < cs.h.rows(); ++n)
    for (std::size_t j = 0; j < cs.h.cols(); ++j)
      resid += std::norm(cs.h(n, j) - t.sigma * t.left[n] * std::conj(t.right[j]));
  CHECK(std::sqrt(resid) < 1e-9 * t.sigma);
}

TEST_CASE("LoS gain matches the Friis oracle") {
  Scenario sc = desk_scenario();
  sc.irs_pos = {60.0, 80.0};  // 100 m from the origin
  sc = generate_scenario(sc);
  ChannelSet cs = build_channels(sc);
  auto t = linalg::top_singular_triplet(cs.h);
  double gain = t.sigma * t.sigma /
                static_cast<double>(sc.irs_elements() * sc.gnb_antennas());
  // independent formula: (lambda / 4 pi d)^2 at 28 GHz, 100 m
  double lambda = 299792458.0 / sc.carrier_hz;
  double expected = std::pow(lambda / (4.0 * 3.14159265358979323846 * 100.0), 2.0);
  CHECK(expected == doctest::Approx(7.2581e-11).epsilon(1e-3));
  CHECK(gain == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("doubling the IRS-UE distance scales mean power by the exponent") {
  Scenario base = desk_scenario();
  base.num_ues = 1;
  base.pathloss_exponent_nlos = 2.0;
  double p_near = 0.0, p_far = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    Scenario sc = base;
    sc.seed = 9000 + s;
    sc = generate_scenario(sc);
    sc.ue_positions[0] = {sc.irs_pos.x - 40.0 / std::sqrt(2.0),
                          sc.irs_pos.y - 40.0 / std::sqrt(2.0)};
    double n1 = build_channels(sc).g[0].frobenius_norm();
    p_near += n1 * n1;
    sc.ue_positions[0] = {sc.irs_pos.x - 80.0 / std::sqrt(2.0),
                          sc.irs_pos.y - 80.0 / std::sqrt(2.0)};
    double n2 = build_channels(sc).g[0].frobenius_norm();
    p_far += n2 * n2;
  }
  CHECK(p_near / p_far == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("mean NLoS power matches the path-loss normalization") {
  Scenario base = desk_scenario();
  base.num_ues = 1;
  double acc = 0.0;
  const double d = 60.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    Scenario sc = base;
    sc.seed = 31000 + s;
    sc = generate_scenario(sc);
    sc.ue_positions[0] = {sc.irs_pos.x - d / std::sqrt(2.0),
                          sc.irs_pos.y - d / std::sqrt(2.0)};
    double n = build_channels(sc).g[0].frobenius_norm();
    acc += n * n;
  }
  acc /= 200.0;
  double expected = nlos_gain(d, base.carrier_hz, base.pathloss_exponent_nlos) *
                    static_cast<double>(base.ue_antennas * base.irs_array.count());
  CHECK(acc == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("UE collocated with the IRS is rejected") {
  Scenario sc = generate_scenario(desk_scenario());
  sc.ue_positions[0] = {sc.irs_pos.x + 0.4, sc.irs_pos.y};
  CHECK_THROWS_AS(build_channels(sc), std::invalid_argument);
}
