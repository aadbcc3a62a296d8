#include "mtlab/process.hpp"

#include <cmath>
#include <stdexcept>

#include "mtlab/errors.hpp"

namespace mtlab {

std::vector<double> generate_ma(const WeightProfile& weights, const ErrorModel& model,
                                std::size_t nu, const RandomStream& stream) {
    if (nu == 0) throw std::invalid_argument("generate_ma requires nu >= 1");
    const int k_min = weights.min_offset();
    const int k_max = weights.max_offset();
    // eps index range [1 + k_min, nu + k_max], stored with eps[0] = eps_{1+k_min}.
    const std::size_t eps_len = nu + static_cast<std::size_t>(k_max - k_min);
    std::vector<double> eps(eps_len);
    Drawer drawer(model, stream);
    drawer.fill(eps.data(), eps_len);

    std::vector<double> x(nu, 0.0);
    for (std::size_t i = 0; i < nu; ++i) {
        double acc = 0.0;
        for (const auto& e : weights.entries()) {
            acc += e.value * eps[i + static_cast<std::size_t>(e.offset - k_min)];
        }
        x[i] = acc;
    }
    return x;
}

double autocovariance(const WeightProfile& weights, double err_var, std::size_t lag) {
    if (!(err_var > 0.0)) throw std::invalid_argument("autocovariance requires err_var > 0");
    double acc = 0.0;
    const auto& entries = weights.entries();
    for (const auto& a : entries) {
        for (const auto& b : entries) {
            if (b.offset == a.offset + static_cast<int>(lag)) acc += a.value * b.value;
        }
    }
    return err_var * acc;
}

GroupData generate_groups(const WeightProfile& weights, const ErrorModel& model,
                          std::size_t nu, std::size_t n, const std::vector<double>& mu,
                          const RandomStream& stream) {
    if (nu == 0) throw std::invalid_argument("generate_groups requires nu >= 1");
    if (n < 2) throw std::invalid_argument("generate_groups requires n >= 2");
    if (mu.size() != nu) throw std::invalid_argument("generate_groups requires |mu| = nu");

    GroupData data;
    data.means = mu;
    data.n = n;
    data.nu = nu;
    data.values.assign(nu * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::vector<double> col =
            generate_ma(weights, model, nu, stream.child(static_cast<std::uint64_t>(j)));
        for (std::size_t i = 0; i < nu; ++i) {
            data.values[i * n + j] = mu[i] + col[i];
        }
    }
    return data;
}

std::vector<double> group_mean_stats(const GroupData& data) {
    if (data.nu == 0 || data.n == 0 || data.values.size() != data.nu * data.n) {
        throw std::invalid_argument("group_mean_stats requires populated GroupData");
    }
    const double root_n = std::sqrt(static_cast<double>(data.n));
    std::vector<double> x(data.nu);
    for (std::size_t i = 0; i < data.nu; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < data.n; ++j) sum += data.at(i, j);
        x[i] = sum / root_n;
    }
    return x;
}

std::vector<double> group_t_stats(const GroupData& data) {
    if (data.n < 2 || data.values.size() != data.nu * data.n) {
        throw std::invalid_argument("group_t_stats requires populated GroupData with n >= 2");
    }
    const double n = static_cast<double>(data.n);
    const double root_n = std::sqrt(n);
    std::vector<double> y(data.nu);
    for (std::size_t i = 0; i < data.nu; ++i) {
        double sum = 0.0;
        double sumsq = 0.0;
        for (std::size_t j = 0; j < data.n; ++j) {
            const double v = data.at(i, j);
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum / n;
        const double var_n = sumsq / n - mean * mean;
        if (!(var_n > 0.0)) {
            throw DegenerateSampleError("zero within-row variance at row " + std::to_string(i + 1));
        }
        y[i] = (sum / root_n) / std::sqrt(var_n);
    }
    return y;
}

WeightProfile ar_truncated_weights(std::size_t r, const std::vector<double>& a, double delta) {
    if (a.size() != r) throw std::invalid_argument("ar_truncated_weights requires |a| = r");
    if (delta < 0.0) throw std::invalid_argument("ar_truncated_weights requires delta >= 0");
    std::vector<double> theta(r + 1);
    double prod = 1.0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k <= r; ++k) {
        if (k > 0) {
            if (a[k - 1] < 0.0) {
                throw std::invalid_argument("ar_truncated_weights requires a_k >= 0");
            }
            const double rho = 1.0 - a[k - 1] * delta;
            if (rho < 0.0) {
                throw std::invalid_argument("ar_truncated_weights: 1 - a_k*delta < 0, delta too large");
            }
            prod *= rho;
        }
        theta[k] = prod;
        sum_sq += prod * prod;
    }
    const double scale = 1.0 / std::sqrt(sum_sq);
    // theta_{-k} stored at offset -k; offsets ascend from -r to 0.
    std::vector<WeightProfile::Entry> entries;
    entries.reserve(r + 1);
    for (std::size_t k = 0; k <= r; ++k) {
        const std::size_t idx = r - k;
        entries.push_back({-static_cast<int>(idx), scale * theta[idx]});
    }
    return WeightProfile(entries);
}

}  // namespace mtlab
