#ifndef MTLAB_CLUSTERS_HPP
#define MTLAB_CLUSTERS_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "mtlab/rng.hpp"

namespace mtlab {

/// Histogram of window counts M recorded at exceedance centers. Because a
/// cluster of q exceedances is recorded once per member, the raw pmf
/// estimates P(M = q | center exceeds), which size-biases the per-cluster
/// law by a factor q; per_cluster_pmf undoes that weighting.
struct ClusterHistogram {
    std::map<std::size_t, std::size_t> counts;
    std::size_t total = 0;
    bool empty_warning = false;

    // scan metadata
    std::size_t series_scanned = 0;
    std::size_t values_scanned = 0;
    std::size_t overlapping_records = 0;  // records within 2r of the previous one

    /// Normalized record-level pmf: estimates P(M = q | X_center > x).
    std::map<std::size_t, double> pmf() const;

    /// Inverse-size-weighted pmf: estimates the per-cluster size law.
    std::map<std::size_t, double> per_cluster_pmf() const;

    double mean() const;
};

/// Generates one series from a stream; used by the scanning estimator.
using SeriesSource = std::function<std::vector<double>(const RandomStream&)>;

/// Number of strict exceedances of x in the window [i0-r, i0+r] (1-based i0,
/// center included). Throws std::out_of_range if the window leaves the series.
std::size_t window_count(const std::vector<double>& series, std::size_t i0, std::size_t r,
                         double x);

/// Maximal runs of indices with consecutive gaps <= gap; sizes in order.
std::vector<std::size_t> run_clusters(const std::vector<std::size_t>& indices,
                                      std::size_t gap);

/// Scans `budget` generated series and records window_count at every
/// exceedance center i0 in [1+r, nu-r]. Stationarity makes each record a draw
/// from the law of M given that the window center exceeds x.
ClusterHistogram conditional_window_histogram(const SeriesSource& source, double x,
                                              std::size_t r, std::size_t budget,
                                              const RandomStream& stream);

/// #{N > 1} / #{N > 0}; empty optional when no sample has N > 0.
std::optional<double> clustering_proportion(const std::vector<std::size_t>& n_samples);

/// Unbiased sample variance over sample mean; empty optional at zero mean.
std::optional<double> dispersion_index(const std::vector<std::size_t>& n_samples);

/// Kolmogorov-Smirnov distance between sorted points in [0,1] and the uniform
/// distribution.
double ks_uniform(std::vector<double> points);

/// KS distance between {I_j / nu} and uniform; empty optional when no indices.
std::optional<double> spacing_uniformity(const std::vector<std::size_t>& indices,
                                         std::size_t nu);

/// Asymptotic p-value for a KS distance d at sample size n (Kolmogorov
/// distribution with the Stephens small-sample correction).
double ks_pvalue(double d, std::size_t n);

}  // namespace mtlab

#endif
