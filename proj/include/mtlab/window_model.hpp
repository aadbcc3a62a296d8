#ifndef MTLAB_WINDOW_MODEL_HPP
#define MTLAB_WINDOW_MODEL_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "mtlab/rng.hpp"

namespace mtlab {

/// Local window of a highly correlated stationary Gaussian process around a
/// central coordinate. Window indices are {-r..-1, 1..r}; the length-2r
/// coefficient vector c holds c_1..c_2r with c_0 = 0 implicit, and
/// Sigma1(i, j) = c_|i| + c_|j| - c_|i-j|.
struct GaussianWindowModel {
    std::size_t r = 0;
    std::vector<double> c;
    double delta = 0.0;
    Eigen::MatrixXd sigma1;
    Eigen::MatrixXd factor;  // symmetric square root of sigma1

    /// Map window index in {-r..-1, 1..r} to a matrix position 0..2r-1.
    std::size_t position(int index) const;
    /// Inverse of position().
    int index_at(std::size_t position) const;
};

struct WindowSample {
    double x0 = 0.0;
    std::vector<double> neighbors;  // ordered by window index -r..-1, 1..r
};

/// Coefficients c_1..c_2r induced by autoregression constants a_1..a_r:
/// c_j = (r+1)^{-1} sum_{k=0}^{r} (a_{k+1} + ... + a_{k+j}), reading a_m = 0
/// for m > r.
std::vector<double> window_coefficients(std::size_t r, const std::vector<double>& a);

/// Builds and validates the window model. Throws WindowModelError when Sigma1
/// has an eigenvalue below -1e-10 or a full-window correlation 1 - c_k*delta
/// falls outside [-1, 1].
GaussianWindowModel build_window_model(std::size_t r, const std::vector<double>& c, double delta);

/// Draws X_0 from the standard normal truncated to (t, inf), then the 2r
/// neighbors from the exact conditional Gaussian with mean (1 - c_|i|*delta)*X_0
/// and covariance delta*Sigma1. Pass t = -inf for an untruncated center.
WindowSample sample_window_conditional(const GaussianWindowModel& model, double t,
                                       const RandomStream& stream);

}  // namespace mtlab

#endif
