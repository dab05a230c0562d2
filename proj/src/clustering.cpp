#include "irsched/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "irsched/rng.hpp"

namespace irsched::clustering {

namespace {

using irsopt::link_snr;

double rate_of(double gamma) { return std::log2(1.0 + gamma); }

void check_z(std::size_t z, std::size_t k) {
  if (z < 1 || z > k)
    throw std::invalid_argument("clustering: Z must satisfy 1 <= Z <= K");
}

// UE indices ordered by decreasing optimal SNR, ties to the lower index.
std::vector<std::size_t> order_by_snr(const std::vector<UeLink>& links) {
  std::vector<std::size_t> order(links.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return links[a].gamma_star > links[b].gamma_star;
  });
  return order;
}

double sq_euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double sq_circular(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = circular_distance(a[i], b[i]);
    s += d * d;
  }
  return s;
}

double log_add(double a, double b) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

std::string policy_name(Policy p) {
  switch (p) {
    case Policy::CWC: return "cwc";
    case Policy::OSCWC: return "oscwc";
    case Policy::KM: return "km";
    case Policy::HC: return "hc";
    case Policy::RANDOM: return "random";
    case Policy::UNCLUSTERED: return "unclustered";
  }
  return "?";
}

std::size_t assign_to_best_centroid(const UeLink& ue,
                                    const std::vector<IrsConfiguration>& centroids,
                                    const Powers& powers) {
  if (centroids.empty())
    throw std::invalid_argument("assign_to_best_centroid: no centroids");
  // argmin_z log2((1+Gamma*)/(1+Gamma_z)) reduces to argmax_z Gamma_z.
  std::size_t best = 0;
  double best_gamma = link_snr(ue, centroids[0], powers);
  for (std::size_t z = 1; z < centroids.size(); ++z) {
    double gamma = link_snr(ue, centroids[z], powers);
    if (gamma > best_gamma) {
      best_gamma = gamma;
      best = z;
    }
  }
  return best;
}

double partition_sum_rate(const std::vector<UeLink>& links,
                          const std::vector<std::size_t>& assignment,
                          const std::vector<IrsConfiguration>& centroids,
                          const Powers& powers) {
  double sum = 0.0;
  for (std::size_t k = 0; k < links.size(); ++k)
    sum += rate_of(link_snr(links[k], centroids[assignment[k]], powers));
  return sum;
}

IrsConfiguration weighted_circular_mean(const std::vector<IrsConfiguration>& configs,
                                        const std::vector<double>& weights) {
  if (configs.empty() || configs.size() != weights.size())
    throw std::invalid_argument("weighted_circular_mean: bad arguments");
  const std::size_t n = configs.front().size();
  IrsConfiguration mean;
  mean.theta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    linalg::Complex acc = 0.0;
    for (std::size_t k = 0; k < configs.size(); ++k)
      acc += weights[k] * std::polar(1.0, configs[k][i]);
    mean[i] = canonical_angle(std::arg(acc));
  }
  return mean;
}

ClusteringOutcome cwc(const std::vector<UeLink>& links, std::size_t z,
                      const Powers& powers, const ClusterParams& params) {
  const std::size_t k_total = links.size();
  check_z(z, k_total);

  // Initialization: the Z strongest UEs seed the clusters with their own
  // optimal configurations.
  std::vector<std::size_t> order = order_by_snr(links);
  std::vector<IrsConfiguration> centroids(z);
  std::vector<std::size_t> assignment(k_total);
  std::vector<char> is_seed(k_total, 0);
  std::vector<std::size_t> seed_cluster(k_total, 0);
  for (std::size_t zi = 0; zi < z; ++zi) {
    std::size_t ue = order[zi];
    centroids[zi] = links[ue].phi_star;
    assignment[ue] = zi;
    is_seed[ue] = 1;
    seed_cluster[ue] = zi;
  }
  run_indexed(
      k_total,
      [&](std::size_t k) {
        if (!is_seed[k]) assignment[k] = assign_to_best_centroid(links[k], centroids, powers);
      },
      params.exec);

  int iterations = 1;
  double rate = partition_sum_rate(links, assignment, centroids, powers);

  while (iterations < params.max_iter) {
    // Centroid update: rate-weighted circular mean of the members' optimal
    // configurations, weights taken at the current centroid. Empty clusters
    // keep their previous centroid.
    std::vector<IrsConfiguration> next_centroids(z);
    for (std::size_t zc = 0; zc < z; ++zc) {
      std::vector<IrsConfiguration> member_cfg;
      std::vector<double> member_w;
      for (std::size_t k = 0; k < k_total; ++k) {
        if (assignment[k] != zc) continue;
        member_cfg.push_back(links[k].phi_star);
        member_w.push_back(rate_of(link_snr(links[k], centroids[zc], powers)));
      }
      if (member_cfg.empty())
        next_centroids[zc] = centroids[zc];
      else
        next_centroids[zc] = weighted_circular_mean(member_cfg, member_w);
      if (params.quant_bits > 0)
        next_centroids[zc] = irsopt::quantize(next_centroids[zc], params.quant_bits);
    }

    std::vector<std::size_t> next_assignment(k_total);
    run_indexed(
        k_total,
        [&](std::size_t k) {
          if (params.pin_seeds && is_seed[k])
            next_assignment[k] = seed_cluster[k];
          else
            next_assignment[k] = assign_to_best_centroid(links[k], next_centroids, powers);
        },
        params.exec);

    double next_rate = partition_sum_rate(links, next_assignment, next_centroids, powers);
    ++iterations;
    centroids = std::move(next_centroids);
    assignment = std::move(next_assignment);
    double delta = std::fabs(next_rate - rate);
    rate = next_rate;
    if (delta < params.conv_tol) break;
  }

  return ClusteringOutcome{std::move(assignment), std::move(centroids), Policy::CWC,
                           iterations};
}

ClusteringOutcome oscwc(const std::vector<UeLink>& links, std::size_t z,
                        const Powers& powers, Exec exec) {
  ClusterParams params;
  params.max_iter = 1;
  params.exec = exec;
  ClusteringOutcome out = cwc(links, z, powers, params);
  out.policy = Policy::OSCWC;
  return out;
}

ClusteringOutcome kmeans(const std::vector<IrsConfiguration>& points, std::size_t z,
                         std::uint64_t seed, const KmParams& params) {
  const std::size_t k_total = points.size();
  check_z(z, k_total);
  const std::size_t dim = points.front().size();
  Rng rng(seed);

  // Forgy init: Z distinct data points drawn without replacement.
  std::vector<std::size_t> idx(k_total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < z; ++i)
    std::swap(idx[i], idx[i + rng.below(k_total - i)]);
  std::vector<IrsConfiguration> centroids(z);
  for (std::size_t i = 0; i < z; ++i) centroids[i] = points[idx[i]];

  auto dist2 = params.circular_distance ? sq_circular : sq_euclidean;

  std::vector<std::size_t> assignment(k_total, k_total);  // sentinel
  int iterations = 0;
  while (iterations < params.max_iter) {
    ++iterations;
    std::vector<std::size_t> next(k_total);
    for (std::size_t k = 0; k < k_total; ++k) {
      std::size_t best = 0;
      double best_d = dist2(points[k].theta, centroids[0].theta);
      for (std::size_t zc = 1; zc < z; ++zc) {
        double d = dist2(points[k].theta, centroids[zc].theta);
        if (d < best_d) {
          best_d = d;
          best = zc;
        }
      }
      next[k] = best;
    }
    if (next == assignment) break;  // stable: centroids already match members
    assignment = std::move(next);

    for (std::size_t zc = 0; zc < z; ++zc) {
      std::vector<std::size_t> members;
      for (std::size_t k = 0; k < k_total; ++k)
        if (assignment[k] == zc) members.push_back(k);
      if (members.empty()) {
        // Re-seed at the point farthest from the current centroid.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t k = 0; k < k_total; ++k) {
          double d = dist2(points[k].theta, centroids[zc].theta);
          if (d > far_d) {
            far_d = d;
            far = k;
          }
        }
        centroids[zc] = points[far];
        continue;
      }
      if (params.circular_distance) {
        std::vector<IrsConfiguration> cfgs;
        for (std::size_t k : members) cfgs.push_back(points[k]);
        centroids[zc] = weighted_circular_mean(cfgs, std::vector<double>(cfgs.size(), 1.0));
      } else {
        IrsConfiguration mean;
        mean.theta.assign(dim, 0.0);
        for (std::size_t k : members)
          for (std::size_t i = 0; i < dim; ++i) mean[i] += points[k][i];
        for (std::size_t i = 0; i < dim; ++i)
          mean[i] /= static_cast<double>(members.size());
        centroids[zc] = std::move(mean);
      }
    }
  }

  return ClusteringOutcome{std::move(assignment), std::move(centroids), Policy::KM,
                           iterations};
}

namespace {

struct UpgmaResult {
  std::vector<std::pair<std::size_t, std::size_t>> merges;
  std::vector<std::vector<std::size_t>> clusters;  // ordered by smallest member
};

UpgmaResult upgma_core(const std::vector<IrsConfiguration>& points, std::size_t z) {
  const std::size_t k_total = points.size();
  check_z(z, k_total);

  std::vector<std::vector<std::size_t>> clusters(k_total);
  for (std::size_t k = 0; k < k_total; ++k) clusters[k] = {k};

  // pairwise Euclidean distances; Lance-Williams average-linkage updates
  std::vector<std::vector<double>> dist(k_total, std::vector<double>(k_total, 0.0));
  for (std::size_t i = 0; i < k_total; ++i)
    for (std::size_t j = i + 1; j < k_total; ++j) {
      double d = std::sqrt(sq_euclidean(points[i].theta, points[j].theta));
      dist[i][j] = dist[j][i] = d;
    }

  UpgmaResult out;
  while (clusters.size() > z) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < clusters.size(); ++i)
      for (std::size_t j = i + 1; j < clusters.size(); ++j)
        if (dist[i][j] < best) {  // strict: ties keep the smallest (i, j)
          best = dist[i][j];
          bi = i;
          bj = j;
        }

    out.merges.emplace_back(clusters[bi].front(), clusters[bj].front());
    const double ni = static_cast<double>(clusters[bi].size());
    const double nj = static_cast<double>(clusters[bj].size());
    for (std::size_t m = 0; m < clusters.size(); ++m) {
      if (m == bi || m == bj) continue;
      dist[bi][m] = dist[m][bi] = (ni * dist[bi][m] + nj * dist[bj][m]) / (ni + nj);
    }
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    std::sort(clusters[bi].begin(), clusters[bi].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    for (auto& row : dist) row.erase(row.begin() + static_cast<std::ptrdiff_t>(bj));
    dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  out.clusters = std::move(clusters);
  return out;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> upgma_merges(
    const std::vector<IrsConfiguration>& points, std::size_t z) {
  return upgma_core(points, z).merges;
}

ClusteringOutcome hier_agglomerative(const std::vector<IrsConfiguration>& points,
                                     std::size_t z) {
  UpgmaResult res = upgma_core(points, z);
  const std::size_t k_total = points.size();
  const std::size_t dim = points.front().size();

  ClusteringOutcome out;
  out.policy = Policy::HC;
  out.iterations = static_cast<int>(k_total - z);
  out.assignment.assign(k_total, 0);
  out.centroids.resize(res.clusters.size());
  for (std::size_t zc = 0; zc < res.clusters.size(); ++zc) {
    IrsConfiguration mean;
    mean.theta.assign(dim, 0.0);
    for (std::size_t k : res.clusters[zc]) {
      out.assignment[k] = zc;
      for (std::size_t i = 0; i < dim; ++i) mean[i] += points[k][i];
    }
    for (std::size_t i = 0; i < dim; ++i)
      mean[i] /= static_cast<double>(res.clusters[zc].size());
    out.centroids[zc] = std::move(mean);
  }
  return out;
}

std::vector<std::size_t> sample_surjective_assignment(std::size_t k, std::size_t z,
                                                      Rng& rng) {
  check_z(z, k);
  const double neg_inf = -std::numeric_limits<double>::infinity();

  // lnN[i][j]: log count of ways to place i remaining balls so that the
  // z - j still-empty boxes all get hit.
  std::vector<std::vector<double>> ln_n(k + 1, std::vector<double>(z + 1, neg_inf));
  ln_n[0][z] = 0.0;
  for (std::size_t i = 1; i <= k; ++i) {
    for (std::size_t j = 0; j <= z; ++j) {
      double a = j > 0 ? std::log(static_cast<double>(j)) + ln_n[i - 1][j] : neg_inf;
      double b = j < z ? std::log(static_cast<double>(z - j)) + ln_n[i - 1][j + 1]
                       : neg_inf;
      ln_n[i][j] = log_add(a, b);
    }
  }

  std::vector<std::size_t> out(k);
  std::vector<char> occupied(z, 0);
  std::size_t j = 0;
  for (std::size_t t = 0; t < k; ++t) {
    std::size_t remaining = k - t;
    double a = j > 0 ? std::log(static_cast<double>(j)) + ln_n[remaining - 1][j] : neg_inf;
    double b = j < z ? std::log(static_cast<double>(z - j)) + ln_n[remaining - 1][j + 1]
                     : neg_inf;
    double p_new = b == neg_inf ? 0.0 : std::exp(b - log_add(a, b));
    std::size_t slot = 0;
    if (rng.uniform() < p_new) {
      std::size_t pick = rng.below(z - j);
      for (std::size_t s = 0;; ++s) {
        if (occupied[s]) continue;
        if (pick == 0) {
          slot = s;
          break;
        }
        --pick;
      }
      occupied[slot] = 1;
      ++j;
    } else {
      std::size_t pick = rng.below(j);
      for (std::size_t s = 0;; ++s) {
        if (!occupied[s]) continue;
        if (pick == 0) {
          slot = s;
          break;
        }
        --pick;
      }
    }
    out[t] = slot;
  }
  return out;
}

ClusteringOutcome random_clustering(const std::vector<IrsConfiguration>& points,
                                    std::size_t z, std::uint64_t seed) {
  const std::size_t k_total = points.size();
  check_z(z, k_total);
  Rng rng(seed);
  ClusteringOutcome out;
  out.policy = Policy::RANDOM;
  out.iterations = 1;
  out.assignment = sample_surjective_assignment(k_total, z, rng);
  out.centroids.resize(z);
  for (std::size_t zc = 0; zc < z; ++zc) {
    std::vector<IrsConfiguration> cfgs;
    for (std::size_t k = 0; k < k_total; ++k)
      if (out.assignment[k] == zc) cfgs.push_back(points[k]);
    out.centroids[zc] =
        weighted_circular_mean(cfgs, std::vector<double>(cfgs.size(), 1.0));
  }
  return out;
}

ClusteringOutcome unclustered(const std::vector<UeLink>& links) {
  ClusteringOutcome out;
  out.policy = Policy::UNCLUSTERED;
  out.iterations = 0;
  out.assignment.resize(links.size());
  out.centroids.resize(links.size());
  for (std::size_t k = 0; k < links.size(); ++k) {
    out.assignment[k] = k;
    out.centroids[k] = links[k].phi_star;  // exact copy, no averaging
  }
  return out;
}

}  // namespace irsched::clustering
