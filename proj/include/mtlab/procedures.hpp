#ifndef MTLAB_PROCEDURES_HPP
#define MTLAB_PROCEDURES_HPP

#include <cstddef>
#include <vector>

#include "mtlab/calibration.hpp"

namespace mtlab {

/// Exceedance counts against a threshold ladder. bins[i-1] counts values in
/// [t_i, t_{i-1}) with t_0 = infinity; cumulative[i-1] = N_1 + ... + N_i.
struct TestCounts {
    std::size_t n = 0;  // strict exceedances of t_1
    std::vector<std::size_t> bins;
    std::vector<std::size_t> cumulative;
};

struct RejectionResult {
    std::size_t k_star = 0;
    std::vector<std::size_t> rejected;  // 1-based test indices, ascending
};

/// Number of strict exceedances X_i > t.
std::size_t count_exceedances(const std::vector<double>& series, double t);

/// 1-based indices i with X_i > t, strictly increasing.
std::vector<std::size_t> exceedance_indices(const std::vector<double>& series, double t);

TestCounts bin_counts(const std::vector<double>& series, const ThresholdLadder& ladder);

/// Step-down rule: k_star is the largest k such that the i-th largest
/// statistic exceeds t_i for every i <= k. Ties broken by lower index.
RejectionResult stepdown_reject(const std::vector<double>& series,
                                const ThresholdLadder& ladder);

}  // namespace mtlab

#endif
