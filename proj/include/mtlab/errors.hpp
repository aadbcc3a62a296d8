#ifndef MTLAB_ERRORS_HPP
#define MTLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mtlab {

/// Operation not defined for the given model variant (e.g. survival of the
/// deterministic stub).
struct UnsupportedOperationError : std::logic_error {
    explicit UnsupportedOperationError(const std::string& what) : std::logic_error(what) {}
};

/// The requested moment diverges (Student's t with df <= 2, Pareto with rho <= 2).
struct InfiniteVarianceError : std::domain_error {
    explicit InfiniteVarianceError(const std::string& what) : std::domain_error(what) {}
};

/// A sample row had zero within-row variance, so the t-statistic is undefined.
struct DegenerateSampleError : std::domain_error {
    explicit DegenerateSampleError(const std::string& what) : std::domain_error(what) {}
};

/// Monte Carlo budget too small for the requested tail quantile.
struct InsufficientTailMassError : std::invalid_argument {
    explicit InsufficientTailMassError(const std::string& what) : std::invalid_argument(what) {}
};

/// Window covariance construction failed validation (not PSD, bad range).
struct WindowModelError : std::invalid_argument {
    explicit WindowModelError(const std::string& what) : std::invalid_argument(what) {}
};

/// Experiment configuration is malformed (unknown key, bad value, bad JSON).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mtlab

#endif
