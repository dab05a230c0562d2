#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "irsched/core.hpp"
#include "irsched/irs_opt.hpp"
#include "irsched/parallel.hpp"
#include "irsched/rng.hpp"

namespace irsched::clustering {

using irsopt::UeLink;

enum class Policy { CWC, OSCWC, KM, HC, RANDOM, UNCLUSTERED };

std::string policy_name(Policy p);

/// Partition of the UEs plus one shared IRS configuration per cluster.
struct ClusteringOutcome {
  std::vector<std::size_t> assignment;      // UE index -> cluster index
  std::vector<IrsConfiguration> centroids;  // one per cluster, <= Z distinct
  Policy policy = Policy::UNCLUSTERED;
  int iterations = 0;
};

struct ClusterParams {
  double conv_tol = 1e-4;  // absolute, on the frame sum-rate
  int max_iter = 100;
  bool pin_seeds = false;  // keep the Z seed UEs attached to their own cluster
  int quant_bits = 0;      // project centroids to the codebook when > 0
  Exec exec = Exec::Parallel;
};

struct KmParams {
  int max_iter = 100;
  bool circular_distance = false;  // off for the baseline; wrap-aware variant
};

/// Cluster whose centroid gives the highest SNR (equivalently the lowest
/// rate loss against the UE's own optimum); ties go to the smallest index.
std::size_t assign_to_best_centroid(const UeLink& ue,
                                    const std::vector<IrsConfiguration>& centroids,
                                    const Powers& powers);

/// Capacity-weighted clustering: seeds are the optimal configurations of the
/// Z best UEs; membership by best centroid; centroid update is the
/// rate-weighted circular mean of the members' optimal configurations.
ClusteringOutcome cwc(const std::vector<UeLink>& links, std::size_t z,
                      const Powers& powers, const ClusterParams& params = {});

/// One-shot variant: stops after the initial association, so the centroids
/// stay exactly the optimal configurations of the Z highest-rate UEs.
ClusteringOutcome oscwc(const std::vector<UeLink>& links, std::size_t z,
                        const Powers& powers, Exec exec = Exec::Parallel);

/// Lloyd iterations on the raw phase vectors: plain squared Euclidean
/// distance, arithmetic-mean centroids, 100-iteration cap.
ClusteringOutcome kmeans(const std::vector<IrsConfiguration>& points, std::size_t z,
                         std::uint64_t seed, const KmParams& params = {});

/// Agglomerative average-linkage (UPGMA) merging down to Z clusters.
ClusteringOutcome hier_agglomerative(const std::vector<IrsConfiguration>& points,
                                     std::size_t z);

/// Merge sequence of the UPGMA run, each merge reported as the smallest
/// original point index of the two clusters joined (lower first).
std::vector<std::pair<std::size_t, std::size_t>> upgma_merges(
    const std::vector<IrsConfiguration>& points, std::size_t z);

/// Uniform random surjective assignment onto Z clusters (every cluster
/// non-empty); centroid is the unweighted circular mean of the members.
ClusteringOutcome random_clustering(const std::vector<IrsConfiguration>& points,
                                    std::size_t z, std::uint64_t seed);

/// Z = K singletons with each UE's own optimal configuration; the upper
/// bound every policy meets at Z = K.
ClusteringOutcome unclustered(const std::vector<UeLink>& links);

/// Weighted circular mean, per element: angle of the weighted sum of unit
/// phasors. Invariant under 2*pi shifts of any input.
IrsConfiguration weighted_circular_mean(const std::vector<IrsConfiguration>& configs,
                                        const std::vector<double>& weights);

/// Uniform sample over surjections [K] -> [Z]; equivalent to redrawing a
/// uniform assignment until no cluster is empty, but without the rejection
/// loop (sequential conditional sampling on occupancy counts).
std::vector<std::size_t> sample_surjective_assignment(std::size_t k, std::size_t z,
                                                      Rng& rng);

/// Frame sum-rate of a partition: sum over UEs of log2(1 + SNR at the
/// cluster's shared configuration).
double partition_sum_rate(const std::vector<UeLink>& links,
                          const std::vector<std::size_t>& assignment,
                          const std::vector<IrsConfiguration>& centroids,
                          const Powers& powers);

}  // namespace irsched::clustering
