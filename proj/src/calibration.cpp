#include "mtlab/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "mtlab/errors.hpp"

namespace mtlab {

namespace {

constexpr std::uint64_t CHUNK = std::uint64_t{1} << 19;

/// Largest values of each chunk, merged in chunk order. Chunk i draws from
/// stream.child(i), so the merged pool is independent of the thread count.
std::vector<double> top_pool(const StatSampler& sampler, std::uint64_t budget,
                             std::size_t keep, const RandomStream& stream,
                             unsigned threads) {
    const std::uint64_t n_chunks = (budget + CHUNK - 1) / CHUNK;
    std::vector<std::vector<double>> per_chunk(n_chunks);
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, threads), n_chunks));

    auto run_worker = [&](unsigned worker) {
        std::vector<double> buffer;
        for (std::uint64_t i = worker; i < n_chunks; i += workers) {
            const std::uint64_t lo = i * CHUNK;
            const std::uint64_t hi = std::min(budget, lo + CHUNK);
            const std::size_t count = static_cast<std::size_t>(hi - lo);
            buffer.resize(count);
            Pcg64 engine = stream.child(i).engine();
            for (std::size_t j = 0; j < count; ++j) buffer[j] = sampler(engine);
            if (count > keep) {
                std::nth_element(buffer.begin(), buffer.begin() + (count - keep),
                                 buffer.end());
                per_chunk[i].assign(buffer.begin() + (count - keep), buffer.end());
            } else {
                per_chunk[i] = buffer;
            }
        }
    };

    if (workers == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    run_worker(w);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& err : errors) {
            if (err) std::rethrow_exception(err);
        }
    }

    std::vector<double> merged;
    for (const auto& part : per_chunk) {
        merged.insert(merged.end(), part.begin(), part.end());
    }
    if (merged.size() > keep) {
        std::nth_element(merged.begin(), merged.end() - static_cast<std::ptrdiff_t>(keep),
                         merged.end());
        merged.erase(merged.begin(), merged.end() - static_cast<std::ptrdiff_t>(keep));
    }
    std::sort(merged.begin(), merged.end());
    return merged;
}

std::vector<double> ladder_targets(double alpha, double beta, std::size_t nu, std::size_t k,
                                   LadderConvention convention) {
    if (k == 0) throw std::domain_error("threshold ladder requires k >= 1");
    if (nu == 0) throw std::domain_error("threshold ladder requires nu >= 1");
    const double top = static_cast<double>(k) * beta / static_cast<double>(nu);
    if (top >= 1.0) throw std::domain_error("k*beta/nu >= 1: ladder undefined");
    std::vector<double> s(k);
    for (std::size_t i = 1; i <= k; ++i) {
        s[i - 1] = static_cast<double>(i) * beta / static_cast<double>(nu);
    }
    if (convention == LadderConvention::sidak) {
        s[0] = 1.0 - std::pow(1.0 - alpha, 1.0 / static_cast<double>(nu));
    }
    return s;
}

}  // namespace

double beta_from_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw std::domain_error("beta_from_alpha requires alpha in (0,1)");
    }
    return -std::log1p(-alpha);
}

QuantileEstimate mc_marginal_quantile(const StatSampler& sampler, double s,
                                      std::uint64_t budget, const RandomStream& stream,
                                      unsigned threads) {
    if (!(s > 0.0) || !(s < 1.0)) {
        throw std::domain_error("mc_marginal_quantile requires s in (0,1)");
    }
    if (static_cast<double>(budget) * s < 100.0) {
        throw InsufficientTailMassError(
            "budget * s < 100: too few expected tail samples for a stable quantile");
    }

    const std::uint64_t n = budget;
    const double h = static_cast<double>(n - 1) * (1.0 - s);
    const std::uint64_t lo = static_cast<std::uint64_t>(h);
    const double frac = h - static_cast<double>(lo);

    // Spacing half-width for the local density estimate.
    const std::uint64_t m = std::max<std::uint64_t>(
        2, static_cast<std::uint64_t>(std::llround(0.25 * static_cast<double>(n) * s)));
    const std::size_t keep = static_cast<std::size_t>(n - lo + m + 8);

    const std::vector<double> top = top_pool(sampler, budget, keep, stream, threads);
    const std::uint64_t base = n - top.size();  // global index of top[0]
    auto order_stat = [&](std::uint64_t idx) {
        idx = std::max(idx, base);
        return top[static_cast<std::size_t>(idx - base)];
    };

    QuantileEstimate out;
    const double x_lo = order_stat(lo);
    out.t = lo + 1 < n ? x_lo + frac * (order_stat(lo + 1) - x_lo) : x_lo;

    const std::uint64_t jm = lo > m ? lo - m : 0;
    const std::uint64_t jp = std::min(lo + m, n - 1);
    const double width = order_stat(jp) - order_stat(jm);
    const std::uint64_t span = jp - std::max(jm, base);
    if (width > 0.0 && span > 0) {
        // order-statistic asymptotics: se = sqrt(s(1-s)/n) / f(t)
        const double density = static_cast<double>(span) / (static_cast<double>(n) * width);
        out.se = std::sqrt(s * (1.0 - s) / static_cast<double>(n)) / density;
    }
    return out;
}

ThresholdLadder threshold_ladder(const ErrorModel& marginal, double alpha, std::size_t nu,
                                 std::size_t k, LadderConvention convention) {
    const double beta = beta_from_alpha(alpha);
    const std::vector<double> targets = ladder_targets(alpha, beta, nu, k, convention);
    ThresholdLadder ladder;
    ladder.beta = beta;
    ladder.nu = nu;
    ladder.method.kind = CalibrationMethod::Kind::analytic;
    ladder.se.assign(k, 0.0);
    ladder.thresholds.reserve(k);
    for (double s : targets) {
        ladder.thresholds.push_back(quantile_survival(marginal, s));
    }
    return ladder;
}

ThresholdLadder threshold_ladder(const StatSampler& sampler, double alpha, std::size_t nu,
                                 std::size_t k, std::uint64_t budget,
                                 const RandomStream& stream, unsigned threads,
                                 LadderConvention convention) {
    const double beta = beta_from_alpha(alpha);
    const std::vector<double> targets = ladder_targets(alpha, beta, nu, k, convention);
    ThresholdLadder ladder;
    ladder.beta = beta;
    ladder.nu = nu;
    ladder.method.kind = CalibrationMethod::Kind::monte_carlo;
    ladder.method.budget = budget;
    ladder.method.seed = stream.master_seed;
    for (double s : targets) {
        const QuantileEstimate est = mc_marginal_quantile(sampler, s, budget, stream, threads);
        ladder.thresholds.push_back(est.t);
        ladder.se.push_back(est.se);
    }
    return ladder;
}

StatSampler model1_stat_sampler(WeightProfile weights, ErrorModel model) {
    validate(model);
    std::vector<double> theta;
    for (const auto& e : weights.entries()) theta.push_back(e.value);
    return [theta = std::move(theta), model = std::move(model)](Pcg64& engine) {
        double acc = 0.0;
        for (double w : theta) acc += w * draw_value(model, engine);
        return acc;
    };
}

StatSampler model2_stat_sampler(WeightProfile weights, ErrorModel model, std::size_t n) {
    validate(model);
    if (n < 2) throw std::invalid_argument("model2_stat_sampler requires n >= 2");
    std::vector<double> theta;
    for (const auto& e : weights.entries()) theta.push_back(e.value);
    return [theta = std::move(theta), model = std::move(model), n](Pcg64& engine) {
        double sum = 0.0;
        double sumsq = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double v = 0.0;
            for (double w : theta) v += w * draw_value(model, engine);
            sum += v;
            sumsq += v * v;
        }
        const double nd = static_cast<double>(n);
        const double mean = sum / nd;
        const double var_n = sumsq / nd - mean * mean;
        if (!(var_n > 0.0)) {
            throw DegenerateSampleError("degenerate sample in t-statistic draw");
        }
        return (sum / std::sqrt(nd)) / std::sqrt(var_n);
    };
}

bool analytic_ma_marginal(const WeightProfile& weights, const ErrorModel& model,
                          ErrorModel& out) {
    validate(model);
    if (std::holds_alternative<Gaussian>(model)) {
        const double sd = std::get<Gaussian>(model).sd;
        out = Gaussian{sd * std::sqrt(weights.sum_squares())};
        return true;
    }
    const std::vector<double> nonzero = weights.nonzero_values();
    if (nonzero.size() != 1) return false;
    const double theta = nonzero.front();
    if (std::holds_alternative<StudentT>(model)) {
        // symmetric: scale by |theta|
        StudentT t = std::get<StudentT>(model);
        t.scale *= std::abs(theta);
        out = t;
        return true;
    }
    if (theta <= 0.0) return false;
    if (std::holds_alternative<WeibullTail>(model)) {
        WeibullTail w = std::get<WeibullTail>(model);
        w.rate_c *= std::pow(theta, -w.gamma);
        out = w;
        return true;
    }
    if (std::holds_alternative<Pareto>(model)) {
        Pareto p = std::get<Pareto>(model);
        p.xmin *= theta;
        out = p;
        return true;
    }
    return false;
}

bool analytic_t_marginal(const ErrorModel& model, std::size_t n, ErrorModel& out) {
    validate(model);
    if (n < 2) throw std::invalid_argument("analytic_t_marginal requires n >= 2");
    if (!std::holds_alternative<Gaussian>(model)) return false;
    // With Gaussian errors each row is i.i.d. normal, and the divisor-n
    // t-statistic equals sqrt(n/(n-1)) times a textbook t with n-1 df.
    const double nd = static_cast<double>(n);
    out = StudentT{nd - 1.0, std::sqrt(nd / (nd - 1.0))};
    return true;
}

}  // namespace mtlab
