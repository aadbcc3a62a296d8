#include "mtlab/procedures.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mtlab {

std::size_t count_exceedances(const std::vector<double>& series, double t) {
    return static_cast<std::size_t>(
        std::count_if(series.begin(), series.end(), [t](double x) { return x > t; }));
}

std::vector<std::size_t> exceedance_indices(const std::vector<double>& series, double t) {
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i] > t) indices.push_back(i + 1);
    }
    return indices;
}

TestCounts bin_counts(const std::vector<double>& series, const ThresholdLadder& ladder) {
    const auto& t = ladder.thresholds;
    if (t.empty()) throw std::invalid_argument("bin_counts requires a nonempty ladder");
    TestCounts counts;
    counts.n = count_exceedances(series, t.front());
    counts.bins.assign(t.size(), 0);
    for (double x : series) {
        double upper = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (x >= t[i] && x < upper) {
                ++counts.bins[i];
                break;
            }
            upper = t[i];
        }
    }
    counts.cumulative.resize(t.size());
    std::partial_sum(counts.bins.begin(), counts.bins.end(), counts.cumulative.begin());
    return counts;
}

RejectionResult stepdown_reject(const std::vector<double>& series,
                                const ThresholdLadder& ladder) {
    const auto& t = ladder.thresholds;
    if (t.empty()) throw std::invalid_argument("stepdown_reject requires a nonempty ladder");
    std::vector<std::size_t> order(series.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&series](std::size_t a, std::size_t b) {
        if (series[a] != series[b]) return series[a] > series[b];
        return a < b;
    });

    RejectionResult result;
    const std::size_t depth = std::min(series.size(), t.size());
    while (result.k_star < depth && series[order[result.k_star]] > t[result.k_star]) {
        ++result.k_star;
    }
    result.rejected.assign(order.begin(), order.begin() + result.k_star);
    for (auto& idx : result.rejected) ++idx;
    std::sort(result.rejected.begin(), result.rejected.end());
    return result;
}

}  // namespace mtlab
