#include "irsched/irs_opt.hpp"

#include <cmath>
#include <stdexcept>

namespace irsched::irsopt {

namespace {

std::vector<Complex> row_times_matrix(const std::vector<Complex>& w,
                                      const ComplexMatrix& g) {
  // (w^T G)_n — transpose, no conjugation.
  std::vector<Complex> v(g.cols());
  for (std::size_t n = 0; n < g.cols(); ++n) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) acc += w[i] * g(i, n);
    v[n] = acc;
  }
  return v;
}

std::vector<Complex> matrix_times_col(const ComplexMatrix& h,
                                      const std::vector<Complex>& w) {
  std::vector<Complex> u(h.rows());
  for (std::size_t n = 0; n < h.rows(); ++n) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < h.cols(); ++j) acc += h(n, j) * w[j];
    u[n] = acc;
  }
  return u;
}

double norm_sq(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const Complex& e : v) s += std::norm(e);
  return s;
}

double rate_of(double gamma) { return std::log2(1.0 + gamma); }

}  // namespace

std::vector<Complex> cascade_coefficients(const ComplexMatrix& g, const ComplexMatrix& h,
                                          const std::vector<Complex>& w_u,
                                          const std::vector<Complex>& w_g) {
  if (g.cols() != h.rows() || w_u.size() != g.rows() || w_g.size() != h.cols())
    throw std::invalid_argument("cascade_coefficients: dimension mismatch");
  std::vector<Complex> v = row_times_matrix(w_u, g);
  std::vector<Complex> u = matrix_times_col(h, w_g);
  std::vector<Complex> coeff(v.size());
  for (std::size_t n = 0; n < v.size(); ++n) coeff[n] = v[n] * u[n];
  return coeff;
}

double snr_from_coeff(const std::vector<Complex>& coeff, double w_u_norm_sq,
                      const IrsConfiguration& theta, const Powers& powers) {
  if (coeff.size() != theta.size())
    throw std::invalid_argument("snr_from_coeff: dimension mismatch");
  Complex amp = 0.0;
  for (std::size_t n = 0; n < coeff.size(); ++n)
    amp += coeff[n] * std::polar(1.0, theta[n]);
  return std::norm(amp) * powers.signal_power / (w_u_norm_sq * powers.noise_power);
}

double snr(const ComplexMatrix& g, const ComplexMatrix& h,
           const std::vector<Complex>& w_u, const std::vector<Complex>& w_g,
           const IrsConfiguration& theta, const Powers& powers) {
  return snr_from_coeff(cascade_coefficients(g, h, w_u, w_g), norm_sq(w_u), theta,
                        powers);
}

double link_snr(const UeLink& link, const IrsConfiguration& theta, const Powers& powers) {
  return snr_from_coeff(link.coeff, link.w_u_norm_sq, theta, powers);
}

IrsConfiguration align_phases(const std::vector<Complex>& v,
                              const std::vector<Complex>& u) {
  if (v.size() != u.size()) throw std::invalid_argument("align_phases: length mismatch");
  IrsConfiguration theta;
  theta.theta.resize(v.size());
  for (std::size_t n = 0; n < v.size(); ++n) {
    // arg(0) = 0, so zero entries fall out naturally: their contribution is
    // zero for any phase.
    theta[n] = canonical_angle(-(std::arg(v[n]) + std::arg(u[n])));
  }
  return theta;
}

double quantize_angle(double theta, int bits) {
  const std::size_t m = std::size_t{1} << bits;
  const double step = kTwoPi / static_cast<double>(m);
  const double t = canonical_angle(theta);
  std::size_t lo = static_cast<std::size_t>(t / step) % m;
  std::size_t hi = (lo + 1) % m;
  double d_lo = circular_distance(t, static_cast<double>(lo) * step);
  double d_hi = circular_distance(t, static_cast<double>(hi) * step);
  std::size_t pick;
  if (d_lo < d_hi)
    pick = lo;
  else if (d_hi < d_lo)
    pick = hi;
  else
    pick = std::min(lo, hi);  // exact tie: smaller codebook index
  return static_cast<double>(pick) * step;
}

IrsConfiguration quantize(const IrsConfiguration& theta, int bits) {
  if (bits < 1) throw std::invalid_argument("quantize: bits must be >= 1");
  IrsConfiguration q;
  q.theta.resize(theta.size());
  for (std::size_t n = 0; n < theta.size(); ++n)
    q[n] = quantize_angle(theta[n], bits);
  return q;
}

UeLink optimize_ue(std::size_t ue_index, const ComplexMatrix& g, const ComplexMatrix& h,
                   const Powers& powers, const OptimizeParams& params) {
  if (!(params.rate_tol > 0.0))
    throw std::invalid_argument("optimize_ue: rate_tol must be > 0");

  const bool quantize_in_loop = params.bits > 0 && params.mode == QuantMode::InLoop;

  UeLink link;
  link.ue_index = ue_index;
  link.g = g;

  IrsConfiguration theta = IrsConfiguration::zeros(g.cols());
  double prev_rate = -1.0;

  UeLink best;
  double best_rate = -1.0;

  link.converged = false;
  int it = 0;
  while (it < params.max_iter) {
    ++it;
    // (i) beamformers from the dominant singular pair of the cascade
    ComplexMatrix cascade = linalg::apply_irs(g, theta, h);
    linalg::SingularTriplet trip = linalg::top_singular_triplet(cascade);
    std::vector<Complex> w_g = trip.right;
    std::vector<Complex> w_u(trip.left.size());
    for (std::size_t i = 0; i < w_u.size(); ++i) w_u[i] = std::conj(trip.left[i]);

    // (ii) configuration from phase alignment of the per-element cascade
    std::vector<Complex> v = row_times_matrix(w_u, g);
    std::vector<Complex> u = matrix_times_col(h, w_g);
    IrsConfiguration next = align_phases(v, u);
    if (quantize_in_loop) next = quantize(next, params.bits);

    double gamma = snr(g, h, w_u, w_g, next, powers);
    double rate = rate_of(gamma);
    link.rate_trace.push_back(rate);

    if (rate > best_rate) {
      best_rate = rate;
      best.w_u = w_u;
      best.w_g = w_g;
      best.phi_star = next;
      best.gamma_star = gamma;
    }

    bool fixed_point = quantize_in_loop && next == theta;
    if ((prev_rate >= 0.0 && std::fabs(rate - prev_rate) < params.rate_tol) ||
        fixed_point) {
      link.converged = true;
      best.w_u = w_u;
      best.w_g = w_g;
      best.phi_star = next;
      best.gamma_star = gamma;
      theta = next;
      break;
    }
    prev_rate = rate;
    theta = next;
  }

  link.iterations = it;
  link.w_u = std::move(best.w_u);
  link.w_g = std::move(best.w_g);
  link.phi_star = std::move(best.phi_star);
  link.gamma_star = best.gamma_star;

  if (params.bits > 0 && params.mode == QuantMode::PostHoc) {
    link.phi_star = quantize(link.phi_star, params.bits);
    link.gamma_star = snr(g, h, link.w_u, link.w_g, link.phi_star, powers);
  }

  link.coeff = cascade_coefficients(g, h, link.w_u, link.w_g);
  link.w_u_norm_sq = norm_sq(link.w_u);
  return link;
}

std::vector<UeLink> optimize_all_ues(const channel::ChannelSet& cs,
                                     const OptimizeParams& params, Exec exec) {
  std::vector<UeLink> links(cs.g.size());
  const Powers powers = cs.powers();
  run_indexed(
      cs.g.size(),
      [&](std::size_t k) { links[k] = optimize_ue(k, cs.g[k], cs.h, powers, params); },
      exec);
  return links;
}

std::vector<UeLink> optimize_all_ues_reference(const channel::ChannelSet& cs,
                                               const OptimizeParams& params) {
  std::vector<UeLink> links;
  links.reserve(cs.g.size());
  const Powers powers = cs.powers();
  for (std::size_t k = 0; k < cs.g.size(); ++k)
    links.push_back(optimize_ue(k, cs.g[k], cs.h, powers, params));
  return links;
}

}  // namespace irsched::irsopt
