#ifndef MTLAB_ERROR_MODEL_HPP
#define MTLAB_ERROR_MODEL_HPP

#include <cstddef>
#include <variant>
#include <vector>

#include "mtlab/rng.hpp"
#include "mtlab/weights.hpp"

namespace mtlab {

/// Disturbance distribution for the linear-process generators. The Weibull-tail
/// and Pareto variants are supported on the nonnegative half-line.
struct Gaussian {
    double sd = 1.0;
};

struct StudentT {
    double df;
    double scale = 1.0;
};

/// Survival exp(-rate_c * x^gamma) on x >= 0.
struct WeibullTail {
    double gamma;
    double rate_c = 1.0;
};

/// Survival (x / xmin)^(-rho) on x >= xmin.
struct Pareto {
    double rho;
    double xmin = 1.0;
};

/// Test stub: draws cycle through a fixed sequence.
struct Deterministic {
    std::vector<double> values;
};

using ErrorModel = std::variant<Gaussian, StudentT, WeibullTail, Pareto, Deterministic>;

/// Throws std::invalid_argument unless all shape/scale parameters are valid.
void validate(const ErrorModel& model);

/// P(eps > x). Throws UnsupportedOperationError for the deterministic stub.
double survival(const ErrorModel& model, double x);

/// Inverse of survival: the x with P(eps > x) = s, for s in (0,1).
/// Relative accuracy better than 1e-10.
double quantile_survival(const ErrorModel& model, double s);

/// Var(eps). Throws InfiniteVarianceError when the variance diverges.
double variance(const ErrorModel& model);

/// Rescale weights so that Var(sum_k theta_k eps_k) = Var(eps) * sum theta^2 = 1.
WeightProfile unit_variance_scale(const WeightProfile& weights, const ErrorModel& model);

/// One draw from a continuous variant using uniforms from `engine`. Each
/// variant consumes a fixed number of uniforms per draw (Gaussian and
/// StudentT two, WeibullTail and Pareto one), so sequences are stable across
/// builds and platforms. Throws UnsupportedOperationError for Deterministic.
double draw_value(const ErrorModel& model, Pcg64& engine);

/// Stateful sampler: i.i.d. draws from `model` determined entirely by the
/// (master_seed, stream_index) of `stream`. Continuous variants consume a
/// fixed number of uniforms per draw, so sequences are stable across builds.
class Drawer {
  public:
    Drawer(const ErrorModel& model, const RandomStream& stream);

    double next();

    /// Fill `n` consecutive draws into out[0..n).
    void fill(double* out, std::size_t n);

  private:
    ErrorModel model_;
    Pcg64 engine_;
    std::size_t det_pos_ = 0;
};

}  // namespace mtlab

#endif
