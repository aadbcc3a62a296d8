#ifndef MTLAB_LIMIT_LAWS_HPP
#define MTLAB_LIMIT_LAWS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mtlab/rng.hpp"
#include "mtlab/weights.hpp"
#include "mtlab/window_model.hpp"

namespace mtlab {

/// Limiting cluster-size law: p[q-1] = P(size = q) for q = 1..m.
struct ClusterSizePmf {
    std::vector<double> p;
    double mu = 0.0;  // mean cluster size

    std::size_t max_size() const { return p.size(); }
};

/// P(Poisson(beta) >= k), computed via the regularized incomplete gamma.
double poisson_tail(double beta, std::size_t k);

/// P(Q_1 + ... + Q_i >= i for all 1 <= i <= k) with Q_j i.i.d. Poisson(beta).
/// Exact dynamic programming; Poisson mass truncated below 1e-15.
double fdr_limit_prob(double beta, std::size_t k);

/// p_q = (theta_(q)^rho - theta_(q+1)^rho) / theta_(1)^rho over the ranked
/// nonzero weights. Throws std::domain_error on a negative weight.
ClusterSizePmf cluster_size_pmf(const WeightProfile& weights, double rho);

/// P(sum_{i<=Q} M_i >= k) with Q ~ Poisson(beta/mu) and M_i i.i.d. from the
/// pmf; exact Panjer recursion.
double compound_tail(double beta, const ClusterSizePmf& pmf, std::size_t k);

/// P(sum_{j<=i} D_j >= i for all 1 <= i <= k) where each D_j is an
/// independent compound Poisson(beta/mu) sum of cluster sizes.
double compound_fdr_prob(double beta, const ClusterSizePmf& pmf, std::size_t k);

/// Large-deviation rate of P(sum theta_k eps_k > x) ~ exp(-rate * x^gamma)
/// for light tails: rate = (sum_k theta_k^{gamma/(gamma-1)})^{-(gamma-1)}.
/// Requires gamma > 1.
double ld_rate(const WeightProfile& weights, double gamma);

struct Thm36Reference {
    std::vector<double> pi;  // pi[k] for k = 0..2r
    std::vector<double> se;
    std::uint64_t draws = 0;
};

/// Monte Carlo estimate of the limiting conditional exceedance-count law:
/// with z ~ Exp(1) and Z ~ N(0, Sigma1), tallies #{i : Z_i > d*c_|i| - z/d}.
Thm36Reference thm36_reference_pi(const GaussianWindowModel& model, double d,
                                  std::uint64_t mc_budget, const RandomStream& stream);

/// Empirical finite-level law: draws conditional windows at truncation t and
/// tallies how many neighbors exceed t. Entries sum to 1 exactly.
std::vector<double> thm36_empirical_pi(const GaussianWindowModel& model, double t,
                                       std::uint64_t budget, const RandomStream& stream);

}  // namespace mtlab

#endif
