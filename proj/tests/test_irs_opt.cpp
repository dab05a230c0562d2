#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <iostream>

#include "irsched/channel.hpp"
#include "irsched/irs_opt.hpp"
#include "oracles.hpp"

using namespace irsched;
using namespace irsched::irsopt;
using oracle::TestRng;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Received amplitude with fixed beamformers, maximized by exhaustive search
// over the whole b-bit codebook. Plain odometer enumeration.
double exhaustive_best_amplitude(const std::vector<Complex>& coeff, int bits) {
  const std::size_t m = std::size_t{1} << bits;
  const std::size_t n = coeff.size();
  std::vector<std::size_t> idx(n, 0);
  double best = -1.0;
  while (true) {
    Complex amp = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      amp += coeff[i] * std::polar(1.0, kTwoPi * static_cast<double>(idx[i]) /
                                            static_cast<double>(m));
    best = std::max(best, std::abs(amp));
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] == m) idx[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

double amplitude_at(const std::vector<Complex>& coeff, const IrsConfiguration& theta) {
  Complex amp = 0.0;
  for (std::size_t i = 0; i < coeff.size(); ++i)
    amp += coeff[i] * std::polar(1.0, theta[i]);
  return std::abs(amp);
}

}  // namespace

TEST_CASE("snr all-scalar unit case") {
  ComplexMatrix g(1, 1, {Complex(1, 0)});
  ComplexMatrix h(1, 1, {Complex(1, 0)});
  std::vector<Complex> w{Complex(1, 0)};
  Powers p{1.0, 1.0};
  CHECK(snr(g, h, w, w, IrsConfiguration::zeros(1), p) == doctest::Approx(1.0));
}

TEST_CASE("snr is 2*pi periodic per element") {
  TestRng rng(21);
  ComplexMatrix g = rng.matrix(2, 6);
  ComplexMatrix h = rng.matrix(6, 4);
  auto w_u = rng.unit_vector(2);
  auto w_g = rng.unit_vector(4);
  Powers p{2.0, 0.5};
  std::vector<double> t = rng.phases(6);
  std::vector<double> t2 = t;
  t2[3] += kTwoPi;
  double a = snr(g, h, w_u, w_g, IrsConfiguration(t), p);
  double b = snr(g, h, w_u, w_g, IrsConfiguration(t2), p);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("snr matches the from-scratch matrix-product oracle") {
  TestRng rng(137);
  for (int rep = 0; rep < 20; ++rep) {
    ComplexMatrix g = rng.matrix(2, 5);
    ComplexMatrix h = rng.matrix(5, 3);
    auto w_u = rng.unit_vector(2);
    auto w_g = rng.unit_vector(3);
    std::vector<double> t = rng.phases(5);
    Powers p{1.7, 0.3};
    double mine = snr(g, h, w_u, w_g, IrsConfiguration(t), p);
    double ref = oracle::snr_from_scratch(g, h, w_u, w_g, t, 1.7, 0.3);
    CHECK(mine == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("snr absorbs global phase rotations of the beamformers") {
  TestRng rng(555);
  ComplexMatrix g = rng.matrix(2, 4);
  ComplexMatrix h = rng.matrix(4, 3);
  auto w_u = rng.unit_vector(2);
  auto w_g = rng.unit_vector(3);
  std::vector<double> t = rng.phases(4);
  Powers p{1.0, 1.0};
  double base = snr(g, h, w_u, w_g, IrsConfiguration(t), p);
  Complex rot = std::polar(1.0, 1.2345);
  auto w_u2 = w_u;
  for (Complex& e : w_u2) e *= rot;
  auto w_g2 = w_g;
  for (Complex& e : w_g2) e *= std::polar(1.0, -0.773);
  CHECK(snr(g, h, w_u2, w_g, IrsConfiguration(t), p) == doctest::Approx(base).epsilon(1e-12));
  CHECK(snr(g, h, w_u, w_g2, IrsConfiguration(t), p) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("align_phases on already aligned vectors") {
  std::vector<Complex> ones(4, Complex(1, 0));
  IrsConfiguration t = align_phases(ones, ones);
  for (std::size_t n = 0; n < 4; ++n) CHECK(t[n] == 0.0);
}

TEST_CASE("align_phases quarter-pi pair lands at 3*pi/2") {
  std::vector<Complex> v{std::polar(1.0, kPi / 4)};
  std::vector<Complex> u{std::polar(1.0, kPi / 4)};
  IrsConfiguration t = align_phases(v, u);
  CHECK(t[0] == doctest::Approx(3.0 * kPi / 2.0).epsilon(1e-12));
}

TEST_CASE("align_phases zero entries take phase zero") {
  std::vector<Complex> v{Complex(0, 0), std::polar(2.0, 0.3)};
  std::vector<Complex> u{std::polar(1.0, 0.9), std::polar(1.0, -0.3)};
  IrsConfiguration t = align_phases(v, u);
  CHECK(t[0] == canonical_angle(-0.9));
  CHECK(t[1] == 0.0);
}

TEST_CASE("align_phases dominates random configurations") {
  TestRng rng(808);
  std::vector<Complex> v(6), u(6);
  for (auto& e : v) e = rng.complex_gaussian();
  for (auto& e : u) e = rng.complex_gaussian();
  std::vector<Complex> coeff(6);
  for (std::size_t n = 0; n < 6; ++n) coeff[n] = v[n] * u[n];
  double aligned = amplitude_at(coeff, align_phases(v, u));
  for (int rep = 0; rep < 10000; ++rep) {
    double rnd = amplitude_at(coeff, IrsConfiguration(rng.phases(6)));
    CHECK(aligned + 1e-12 >= rnd);
  }
}

TEST_CASE("quantize leaves codebook points unchanged") {
  for (int bits = 1; bits <= 4; ++bits) {
    const std::size_t m = std::size_t{1} << bits;
    for (std::size_t i = 0; i < m; ++i) {
      double code = kTwoPi * static_cast<double>(i) / static_cast<double>(m);
      CHECK(quantize_angle(code, bits) == code);
    }
  }
}

TEST_CASE("quantize one-bit hand cases") {
  CHECK(quantize_angle(0.99 * kPi, 1) == kPi);
  CHECK(quantize_angle(0.49 * kPi, 1) == 0.0);
}

TEST_CASE("quantize two-bit wrap-around case") {
  // 7*pi/4 + 0.01 is circularly closer to 0 than to 3*pi/2.
  CHECK(quantize_angle(7.0 * kPi / 4.0 + 0.01, 2) == 0.0);
}

TEST_CASE("quantize matches the exhaustive nearest-codeword oracle") {
  TestRng rng(4242);
  for (int rep = 0; rep < 2000; ++rep) {
    int bits = 1 + static_cast<int>(rng.below(4));
    double t = rng.uniform(0.0, kTwoPi);
    const std::size_t m = std::size_t{1} << bits;
    std::size_t best = 0;
    double best_d = 1e9;
    for (std::size_t i = 0; i < m; ++i) {
      double code = kTwoPi * static_cast<double>(i) / static_cast<double>(m);
      double d = circular_distance(t, code);
      if (d < best_d) {  // strict: ties keep the smaller index
        best_d = d;
        best = i;
      }
    }
    CHECK(quantize_angle(t, bits) ==
          kTwoPi * static_cast<double>(best) / static_cast<double>(m));
  }
}

TEST_CASE("quantize is idempotent") {
  TestRng rng(99);
  for (int rep = 0; rep < 200; ++rep) {
    int bits = 1 + static_cast<int>(rng.below(6));
    IrsConfiguration t(rng.phases(5));
    IrsConfiguration q = quantize(t, bits);
    CHECK(quantize(q, bits) == q);
  }
}

TEST_CASE("optimize_ue with one IRS element converges immediately") {
  TestRng rng(17);
  ComplexMatrix g = rng.matrix(2, 1);
  ComplexMatrix h = rng.matrix(1, 3);
  Powers p{1.3, 0.7};
  UeLink link = optimize_ue(0, g, h, p);
  CHECK(link.converged);
  CHECK(link.iterations <= 2);
  // with a single element the aligned amplitude is |coeff[0]|
  double expect = std::norm(Complex(std::abs(link.coeff[0]), 0.0)) * p.signal_power /
                  (link.w_u_norm_sq * p.noise_power);
  CHECK(link.gamma_star == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("optimize_ue reaches the co-phasing optimum in the continuous case") {
  TestRng rng(2718);
  for (int rep = 0; rep < 10; ++rep) {
    ComplexMatrix g = rng.matrix(2, 6);
    ComplexMatrix h = rng.matrix(6, 4);
    Powers p{1.0, 1e-2};
    UeLink link = optimize_ue(0, g, h, p);
    double sum_mags = 0.0;
    for (const Complex& c : link.coeff) sum_mags += std::abs(c);
    double achieved = amplitude_at(link.coeff, link.phi_star);
    CHECK(achieved == doctest::Approx(sum_mags).epsilon(1e-8));
  }
}

TEST_CASE("optimize_ue rate trace is non-decreasing in the continuous case") {
  TestRng rng(31415);
  for (int rep = 0; rep < 10; ++rep) {
    ComplexMatrix g = rng.matrix(2, 8);
    ComplexMatrix h = rng.matrix(8, 4);
    Powers p{1.0, 1e-3};
    UeLink link = optimize_ue(0, g, h, p);
    for (std::size_t i = 1; i < link.rate_trace.size(); ++i)
      CHECK(link.rate_trace[i] + 1e-9 >= link.rate_trace[i - 1]);
  }
}

TEST_CASE("gamma_star is exactly recomputable through snr") {
  TestRng rng(606);
  ComplexMatrix g = rng.matrix(2, 5);
  ComplexMatrix h = rng.matrix(5, 3);
  Powers p{2.0, 0.4};
  UeLink link = optimize_ue(3, g, h, p);
  CHECK(link.ue_index == 3);
  CHECK(snr(g, h, link.w_u, link.w_g, link.phi_star, p) == link.gamma_star);
  CHECK(link_snr(link, link.phi_star, p) == link.gamma_star);
}

TEST_CASE("beamformers come out unit norm") {
  TestRng rng(123);
  ComplexMatrix g = rng.matrix(2, 6);
  ComplexMatrix h = rng.matrix(6, 5);
  Powers p{1.0, 1.0};
  UeLink link = optimize_ue(0, g, h, p);
  double nu = 0.0, ng = 0.0;
  for (const Complex& e : link.w_u) nu += std::norm(e);
  for (const Complex& e : link.w_g) ng += std::norm(e);
  CHECK(std::fabs(std::sqrt(nu) - 1.0) < 1e-9);
  CHECK(std::fabs(std::sqrt(ng) - 1.0) < 1e-9);
}

TEST_CASE("quantized one-bit result never beats the exhaustive oracle") {
  TestRng rng(9090);
  for (int rep = 0; rep < 10; ++rep) {
    ComplexMatrix g = rng.matrix(2, 4);
    ComplexMatrix h = rng.matrix(4, 3);
    Powers p{1.0, 1e-2};
    OptimizeParams params;
    params.bits = 1;
    UeLink link = optimize_ue(0, g, h, p, params);
    // same fixed beamformers for both sides
    double best = exhaustive_best_amplitude(link.coeff, 1);
    double mine = amplitude_at(link.coeff, link.phi_star);
    CHECK(mine <= best + 1e-12);
    for (double t : link.phi_star.theta) CHECK((t == 0.0 || t == kPi));
  }
}

TEST_CASE("align-then-quantize keeps the cos^2 fraction of the optimum") {
  TestRng rng(515);
  for (int bits : {2, 3}) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<Complex> v(5), u(5);
      for (auto& e : v) e = rng.complex_gaussian();
      for (auto& e : u) e = rng.complex_gaussian();
      std::vector<Complex> coeff(5);
      for (std::size_t n = 0; n < 5; ++n) coeff[n] = v[n] * u[n];
      IrsConfiguration q = quantize(align_phases(v, u), bits);
      double mine = amplitude_at(coeff, q);
      double best = exhaustive_best_amplitude(coeff, bits);
      double floor_factor = std::cos(kPi / std::pow(2.0, bits));
      CHECK(mine * mine + 1e-12 >= floor_factor * floor_factor * best * best);
      CHECK(mine <= best + 1e-12);
    }
  }
}

TEST_CASE("quantized alternation declares convergence on a fixed point") {
  TestRng rng(7777);
  ComplexMatrix g = rng.matrix(2, 6);
  ComplexMatrix h = rng.matrix(6, 4);
  Powers p{1.0, 1e-2};
  OptimizeParams params;
  params.bits = 2;
  UeLink link = optimize_ue(0, g, h, p, params);
  CHECK(link.converged);
  for (double t : link.phi_star.theta)
    CHECK(quantize_angle(t, 2) == t);
}

TEST_CASE("post-hoc quantization projects the converged configuration") {
  TestRng rng(888);
  ComplexMatrix g = rng.matrix(2, 6);
  ComplexMatrix h = rng.matrix(6, 4);
  Powers p{1.0, 1e-2};
  OptimizeParams in_loop, post;
  in_loop.bits = post.bits = 3;
  post.mode = QuantMode::PostHoc;
  UeLink a = optimize_ue(0, g, h, p, post);
  for (double t : a.phi_star.theta) CHECK(quantize_angle(t, 3) == t);
  CHECK(snr(g, h, a.w_u, a.w_g, a.phi_star, p) == a.gamma_star);
}

TEST_CASE("convergence within ten iterations (logged, not asserted)") {
  channel::Scenario sc;
  sc.num_ues = 200;
  sc.gnb_array = {2, 4};
  sc.irs_array = {4, 8};
  sc.n_clusters = 4;
  sc.n_rays = 10;
  sc.seed = 20240915;
  sc = channel::generate_scenario(sc);
  channel::ChannelSet cs = channel::build_channels(sc);
  auto links = optimize_all_ues(cs);
  int within = 0;
  for (const auto& l : links)
    if (l.converged && l.iterations <= 10) ++within;
  double pct = 100.0 * within / static_cast<double>(links.size());
  std::cout << "[info] UEs converged within 10 iterations: " << pct << "%\n";
  CHECK(links.size() == 200);
}
