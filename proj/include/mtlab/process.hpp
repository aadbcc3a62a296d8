#ifndef MTLAB_PROCESS_HPP
#define MTLAB_PROCESS_HPP

#include <cstddef>
#include <vector>

#include "mtlab/error_model.hpp"
#include "mtlab/rng.hpp"
#include "mtlab/weights.hpp"

namespace mtlab {

/// nu x n matrix of group-level observations plus the mean vector that
/// generated it. Rows index tests, columns index replicates.
struct GroupData {
    std::vector<double> values;  // row-major, nu rows of n entries
    std::vector<double> means;
    std::size_t n = 0;
    std::size_t nu = 0;

    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

/// Moving average X_i = sum_k theta_k eps_{i+k}, i = 1..nu. The disturbance
/// stream covers the extended index range so every value is an exact
/// stationary draw (no edge truncation).
std::vector<double> generate_ma(const WeightProfile& weights, const ErrorModel& model,
                                std::size_t nu, const RandomStream& stream);

/// err_var * sum_k theta_k theta_{k+lag}; zero beyond the weight support.
double autocovariance(const WeightProfile& weights, double err_var, std::size_t lag);

/// V_ij = mu_i + sum_k theta_k eps'_{i+k,j}; column j draws from
/// stream.child(j), so samples are independent while rows stay dependent.
GroupData generate_groups(const WeightProfile& weights, const ErrorModel& model,
                          std::size_t nu, std::size_t n, const std::vector<double>& mu,
                          const RandomStream& stream);

/// X_i = n^{-1/2} sum_j V_ij.
std::vector<double> group_mean_stats(const GroupData& data);

/// Y_i = n^{-1/2} sum_j V_ij / shat_i with the divisor-n variance
/// shat_i^2 = n^{-1} sum_j V_ij^2 - (n^{-1} sum_j V_ij)^2.
/// Throws DegenerateSampleError when a row has zero within-row variance.
std::vector<double> group_t_stats(const GroupData& data);

/// Near-unit-root truncated autoregressive weights: rho_0 = 1,
/// rho_k = 1 - a_k * delta for 1 <= k <= r, theta_{-k} = c * prod_{j<=k} rho_j,
/// with c chosen so that sum theta^2 = 1. Offsets run from -r to 0.
WeightProfile ar_truncated_weights(std::size_t r, const std::vector<double>& a, double delta);

}  // namespace mtlab

#endif
