#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "irsched/channel.hpp"
#include "irsched/core.hpp"
#include "irsched/linalg.hpp"
#include "irsched/parallel.hpp"

namespace irsched::irsopt {

using linalg::Complex;
using linalg::ComplexMatrix;

/// Whether b-bit quantization is applied inside each alternation step or
/// only once to the converged continuous solution.
enum class QuantMode { InLoop, PostHoc };

struct OptimizeParams {
  int bits = 0;  // 0 = continuous phases
  QuantMode mode = QuantMode::InLoop;
  double rate_tol = 1e-4;
  int max_iter = 50;
};

/// Per-UE result of the alternating beamformer / IRS-configuration
/// optimization, plus the cached cascade coefficients used for fast SNR
/// evaluation at arbitrary configurations.
struct UeLink {
  std::size_t ue_index = 0;
  ComplexMatrix g;                 // N_U x N_I
  std::vector<Complex> w_u;        // unit norm, combining vector (applied transposed)
  std::vector<Complex> w_g;        // unit norm, gNB precoder
  IrsConfiguration phi_star;
  double gamma_star = 0.0;         // linear SNR at phi_star
  int iterations = 0;
  bool converged = true;
  std::vector<double> rate_trace;  // achievable rate after each alternation

  // coeff[n] = (w_u^T G)_n (H w_g)_n; SNR at theta is
  // |sum_n coeff[n] e^{j theta_n}|^2 * sigma_x^2 / (||w_u||^2 sigma_n^2).
  std::vector<Complex> coeff;
  double w_u_norm_sq = 1.0;
};

/// Eq.-style SNR: |w_u^T G diag(e^{j theta}) H w_g|^2 sigma_x^2 / (||w_u||^2 sigma_n^2).
/// Evaluated through the per-element cascade sum so cached and direct paths
/// agree bit for bit.
double snr(const ComplexMatrix& g, const ComplexMatrix& h,
           const std::vector<Complex>& w_u, const std::vector<Complex>& w_g,
           const IrsConfiguration& theta, const Powers& powers);

/// coeff[n] = (w_u^T G)_n * (H w_g)_n
std::vector<Complex> cascade_coefficients(const ComplexMatrix& g, const ComplexMatrix& h,
                                          const std::vector<Complex>& w_u,
                                          const std::vector<Complex>& w_g);

double snr_from_coeff(const std::vector<Complex>& coeff, double w_u_norm_sq,
                      const IrsConfiguration& theta, const Powers& powers);

/// SNR of a link at an arbitrary configuration via its cached coefficients.
double link_snr(const UeLink& link, const IrsConfiguration& theta, const Powers& powers);

/// theta_n = -(arg v_n + arg u_n) mod 2*pi; co-phases every element so the
/// received amplitude becomes sum_n |v_n||u_n|.
IrsConfiguration align_phases(const std::vector<Complex>& v, const std::vector<Complex>& u);

/// Nearest element of {2 pi m / 2^b} in circular distance, ties toward the
/// smaller codebook index.
IrsConfiguration quantize(const IrsConfiguration& theta, int bits);
double quantize_angle(double theta, int bits);

/// Alternating optimization of (w_u, w_g) via the dominant singular pair of
/// the cascade and theta via phase alignment, until the achievable rate
/// settles within rate_tol.
UeLink optimize_ue(std::size_t ue_index, const ComplexMatrix& g, const ComplexMatrix& h,
                   const Powers& powers, const OptimizeParams& params = {});

/// Per-UE optimization over the whole drop; OpenMP over UEs.
std::vector<UeLink> optimize_all_ues(const channel::ChannelSet& cs,
                                     const OptimizeParams& params = {},
                                     Exec exec = Exec::Parallel);

/// Plain-loop reference twin of optimize_all_ues, kept for tests and the
/// benchmark.
std::vector<UeLink> optimize_all_ues_reference(const channel::ChannelSet& cs,
                                               const OptimizeParams& params = {});

}  // namespace irsched::irsopt
