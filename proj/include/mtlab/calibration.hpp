#ifndef MTLAB_CALIBRATION_HPP
#define MTLAB_CALIBRATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "mtlab/error_model.hpp"
#include "mtlab/rng.hpp"
#include "mtlab/weights.hpp"

namespace mtlab {

/// Draws one test statistic using uniforms from the supplied engine.
using StatSampler = std::function<double(Pcg64&)>;

struct CalibrationMethod {
    enum class Kind { analytic, monte_carlo };
    Kind kind = Kind::analytic;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;
};

/// First-threshold convention: beta_over_nu targets survival beta/nu for t1,
/// sidak targets 1 - (1-alpha)^{1/nu}. Later rungs always target i*beta/nu.
enum class LadderConvention { beta_over_nu, sidak };

/// Critical values t_1 > ... > t_k with per-test survival targets i*beta/nu.
struct ThresholdLadder {
    std::vector<double> thresholds;
    std::vector<double> se;
    double beta = 0.0;
    std::size_t nu = 0;
    CalibrationMethod method;
};

/// beta = -log(1 - alpha). Throws std::domain_error outside (0,1).
double beta_from_alpha(double alpha);

struct QuantileEstimate {
    double t = 0.0;
    double se = 0.0;
};

/// Empirical (1-s)-quantile of `budget` draws from the sampler, with an
/// order-statistic standard error (local density estimated from spacings).
/// Work is split into fixed-size chunks keyed by child stream index, so the
/// result is identical for any `threads` value. Requires budget*s >= 100,
/// else InsufficientTailMassError.
QuantileEstimate mc_marginal_quantile(const StatSampler& sampler, double s,
                                      std::uint64_t budget, const RandomStream& stream,
                                      unsigned threads = 1);

/// Analytic ladder for a marginal given in closed form as an ErrorModel.
ThresholdLadder threshold_ladder(const ErrorModel& marginal, double alpha, std::size_t nu,
                                 std::size_t k,
                                 LadderConvention convention = LadderConvention::beta_over_nu);

/// Monte Carlo ladder for marginals without a closed form.
ThresholdLadder threshold_ladder(const StatSampler& sampler, double alpha, std::size_t nu,
                                 std::size_t k, std::uint64_t budget,
                                 const RandomStream& stream, unsigned threads = 1,
                                 LadderConvention convention = LadderConvention::beta_over_nu);

/// One draw of X = sum_k theta_k eps_k (the moving-average marginal).
StatSampler model1_stat_sampler(WeightProfile weights, ErrorModel model);

/// One draw of the divisor-n t-statistic over n group replicates with mu = 0.
StatSampler model2_stat_sampler(WeightProfile weights, ErrorModel model, std::size_t n);

/// Closed-form marginal of sum_k theta_k eps_k when one exists: Gaussian
/// errors (any weights) or a single nonzero weight. Returns false otherwise.
bool analytic_ma_marginal(const WeightProfile& weights, const ErrorModel& model,
                          ErrorModel& out);

/// Closed-form marginal of the Model 2 t-statistic: exact for Gaussian errors
/// with any weights, where Y = sqrt(n/(n-1)) * t_{n-1}. Returns false otherwise.
bool analytic_t_marginal(const ErrorModel& model, std::size_t n, ErrorModel& out);

}  // namespace mtlab

#endif
