#include "mtlab/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtlab {

std::map<std::size_t, double> ClusterHistogram::pmf() const {
    std::map<std::size_t, double> out;
    if (total == 0) return out;
    for (const auto& [size, count] : counts) {
        out[size] = static_cast<double>(count) / static_cast<double>(total);
    }
    return out;
}

std::map<std::size_t, double> ClusterHistogram::per_cluster_pmf() const {
    std::map<std::size_t, double> out;
    if (total == 0) return out;
    double norm = 0.0;
    for (const auto& [size, count] : counts) {
        const double w = static_cast<double>(count) / static_cast<double>(size);
        out[size] = w;
        norm += w;
    }
    for (auto& [size, w] : out) w /= norm;
    return out;
}

double ClusterHistogram::mean() const {
    if (total == 0) return 0.0;
    double acc = 0.0;
    for (const auto& [size, count] : counts) {
        acc += static_cast<double>(size) * static_cast<double>(count);
    }
    return acc / static_cast<double>(total);
}

std::size_t window_count(const std::vector<double>& series, std::size_t i0, std::size_t r,
                         double x) {
    if (i0 < 1 || i0 > series.size()) throw std::out_of_range("window center outside series");
    if (i0 - 1 < r || i0 + r > series.size()) {
        throw std::out_of_range("window [i0-r, i0+r] leaves the series");
    }
    std::size_t count = 0;
    for (std::size_t j = i0 - 1 - r; j <= i0 - 1 + r; ++j) {
        if (series[j] > x) ++count;
    }
    return count;
}

std::vector<std::size_t> run_clusters(const std::vector<std::size_t>& indices,
                                      std::size_t gap) {
    if (gap == 0) throw std::invalid_argument("run_clusters requires gap >= 1");
    std::vector<std::size_t> sizes;
    std::size_t run = 0;
    for (std::size_t j = 0; j < indices.size(); ++j) {
        if (j > 0 && indices[j] <= indices[j - 1]) {
            throw std::invalid_argument("run_clusters requires strictly increasing indices");
        }
        if (run > 0 && indices[j] - indices[j - 1] <= gap) {
            ++run;
        } else {
            if (run > 0) sizes.push_back(run);
            run = 1;
        }
    }
    if (run > 0) sizes.push_back(run);
    return sizes;
}

ClusterHistogram conditional_window_histogram(const SeriesSource& source, double x,
                                              std::size_t r, std::size_t budget,
                                              const RandomStream& stream) {
    if (budget == 0) throw std::invalid_argument("conditional_window_histogram needs budget >= 1");
    ClusterHistogram hist;
    for (std::size_t b = 0; b < budget; ++b) {
        const std::vector<double> series = source(stream.child(b));
        hist.series_scanned += 1;
        hist.values_scanned += series.size();
        if (series.size() < 2 * r + 1) continue;
        std::size_t last_center = 0;
        bool have_last = false;
        for (std::size_t i0 = 1 + r; i0 + r <= series.size(); ++i0) {
            if (series[i0 - 1] > x) {
                const std::size_t m = window_count(series, i0, r, x);
                hist.counts[m] += 1;
                hist.total += 1;
                if (have_last && i0 - last_center <= 2 * r) ++hist.overlapping_records;
                last_center = i0;
                have_last = true;
            }
        }
    }
    hist.empty_warning = hist.total == 0;
    return hist;
}

std::optional<double> clustering_proportion(const std::vector<std::size_t>& n_samples) {
    if (n_samples.empty()) throw std::invalid_argument("clustering_proportion needs samples");
    std::size_t pos = 0;
    std::size_t multi = 0;
    for (std::size_t n : n_samples) {
        if (n > 0) ++pos;
        if (n > 1) ++multi;
    }
    if (pos == 0) return std::nullopt;
    return static_cast<double>(multi) / static_cast<double>(pos);
}

std::optional<double> dispersion_index(const std::vector<std::size_t>& n_samples) {
    if (n_samples.size() < 2) throw std::invalid_argument("dispersion_index needs >= 2 samples");
    const double n = static_cast<double>(n_samples.size());
    double sum = 0.0;
    for (std::size_t v : n_samples) sum += static_cast<double>(v);
    const double mean = sum / n;
    if (mean == 0.0) return std::nullopt;
    double ss = 0.0;
    for (std::size_t v : n_samples) {
        const double d = static_cast<double>(v) - mean;
        ss += d * d;
    }
    return (ss / (n - 1.0)) / mean;
}

double ks_uniform(std::vector<double> points) {
    if (points.empty()) throw std::invalid_argument("ks_uniform needs points");
    std::sort(points.begin(), points.end());
    const double n = static_cast<double>(points.size());
    double d = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        const double f = points[j];
        const double hi = (static_cast<double>(j) + 1.0) / n - f;
        const double lo = f - static_cast<double>(j) / n;
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

std::optional<double> spacing_uniformity(const std::vector<std::size_t>& indices,
                                         std::size_t nu) {
    if (nu == 0) throw std::invalid_argument("spacing_uniformity requires nu >= 1");
    if (indices.empty()) return std::nullopt;
    std::vector<double> points;
    points.reserve(indices.size());
    for (std::size_t idx : indices) {
        if (idx < 1 || idx > nu) throw std::invalid_argument("index outside [1, nu]");
        points.push_back(static_cast<double>(idx) / static_cast<double>(nu));
    }
    return ks_uniform(std::move(points));
}

double ks_pvalue(double d, std::size_t n) {
    if (n == 0) throw std::invalid_argument("ks_pvalue requires n >= 1");
    if (d <= 0.0) return 1.0;
    const double root_n = std::sqrt(static_cast<double>(n));
    const double lambda = (root_n + 0.12 + 0.11 / root_n) * d;
    // Kolmogorov survival Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace mtlab
