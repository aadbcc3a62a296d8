#include "mtlab/limit_laws.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mtlab/error_model.hpp"

namespace mtlab {

namespace {

/// Poisson(lambda) pmf values 0..q_max, where q_max is the smallest index
/// whose remaining tail mass drops below `tail_cut`.
std::vector<double> poisson_pmf_truncated(double lambda, double tail_cut) {
    std::vector<double> pmf;
    double term = std::exp(-lambda);
    double cum = 0.0;
    for (std::size_t q = 0; q < 4096; ++q) {
        pmf.push_back(term);
        cum += term;
        if (1.0 - cum < tail_cut && q >= 1) break;
        term *= lambda / static_cast<double>(q + 1);
    }
    return pmf;
}

/// Masses of the compound Poisson sum S = sum_{i<=Q} M_i on 0..s_max via the
/// Panjer recursion; each entry is exact up to rounding.
std::vector<double> compound_masses(double lambda, const ClusterSizePmf& pmf,
                                    std::size_t s_max) {
    std::vector<double> g(s_max + 1, 0.0);
    g[0] = std::exp(-lambda);
    const std::size_t m = pmf.max_size();
    for (std::size_t s = 1; s <= s_max; ++s) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= std::min(s, m); ++j) {
            acc += static_cast<double>(j) * pmf.p[j - 1] * g[s - j];
        }
        g[s] = lambda * acc / static_cast<double>(s);
    }
    return g;
}

void validate_pmf(const ClusterSizePmf& pmf) {
    if (pmf.p.empty()) throw std::invalid_argument("cluster-size pmf is empty");
    double sum = 0.0;
    for (double p : pmf.p) {
        if (p < 0.0) throw std::invalid_argument("cluster-size pmf has negative mass");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("cluster-size pmf does not sum to 1");
    }
}

}  // namespace

double poisson_tail(double beta, std::size_t k) {
    if (!(beta > 0.0)) throw std::domain_error("poisson_tail requires beta > 0");
    if (k == 0) return 1.0;
    // P(Pois(beta) >= k) = P(Gamma(k) <= beta) = gamma_p(k, beta).
    return boost::math::gamma_p(static_cast<double>(k), beta);
}

double fdr_limit_prob(double beta, std::size_t k) {
    if (!(beta > 0.0)) throw std::domain_error("fdr_limit_prob requires beta > 0");
    if (k == 0) throw std::domain_error("fdr_limit_prob requires k >= 1");
    const std::vector<double> pmf = poisson_pmf_truncated(beta, 1e-15);
    // State: surplus s_i = Q_1 + ... + Q_i - i, conditioned on staying >= 0.
    const std::size_t cap = pmf.size() * k + 1;
    std::vector<double> alive(1, 1.0);  // surplus 0 before any bin
    std::vector<double> next;
    for (std::size_t i = 0; i < k; ++i) {
        next.assign(std::min(alive.size() + pmf.size(), cap), 0.0);
        for (std::size_t s = 0; s < alive.size(); ++s) {
            if (alive[s] == 0.0) continue;
            for (std::size_t q = 0; q < pmf.size(); ++q) {
                // new surplus s + q - 1; surviving paths need >= 0
                if (s + q < 1) continue;
                const std::size_t ns = std::min(s + q - 1, next.size() - 1);
                next[ns] += alive[s] * pmf[q];
            }
        }
        alive.swap(next);
    }
    double total = 0.0;
    for (double p : alive) total += p;
    return total;
}

ClusterSizePmf cluster_size_pmf(const WeightProfile& weights, double rho) {
    if (!(rho > 0.0)) throw std::domain_error("cluster_size_pmf requires rho > 0");
    std::vector<double> nonzero;
    for (const auto& e : weights.entries()) {
        if (e.value < 0.0) {
            throw std::domain_error("cluster_size_pmf requires nonnegative weights");
        }
        if (e.value > 0.0) nonzero.push_back(e.value);
    }
    if (nonzero.empty()) {
        throw std::domain_error("cluster_size_pmf requires a positive weight");
    }
    std::sort(nonzero.begin(), nonzero.end(), std::greater<>());
    const double top = std::pow(nonzero.front(), rho);
    ClusterSizePmf out;
    out.p.resize(nonzero.size());
    for (std::size_t q = 0; q < nonzero.size(); ++q) {
        const double cur = std::pow(nonzero[q], rho);
        const double next = q + 1 < nonzero.size() ? std::pow(nonzero[q + 1], rho) : 0.0;
        out.p[q] = (cur - next) / top;
        out.mu += static_cast<double>(q + 1) * out.p[q];
    }
    return out;
}

double compound_tail(double beta, const ClusterSizePmf& pmf, std::size_t k) {
    if (!(beta > 0.0)) throw std::domain_error("compound_tail requires beta > 0");
    validate_pmf(pmf);
    if (k == 0) return 1.0;
    const double lambda = beta / pmf.mu;
    const std::vector<double> g = compound_masses(lambda, pmf, k - 1);
    double below = 0.0;
    for (double mass : g) below += mass;
    return 1.0 - below;
}

double compound_fdr_prob(double beta, const ClusterSizePmf& pmf, std::size_t k) {
    if (!(beta > 0.0)) throw std::domain_error("compound_fdr_prob requires beta > 0");
    validate_pmf(pmf);
    if (k == 0) throw std::domain_error("compound_fdr_prob requires k >= 1");
    const double lambda = beta / pmf.mu;
    // Per-bin increment masses h_d for d = 0..k-1; anything >= k absorbs.
    const std::vector<double> h = compound_masses(lambda, pmf, k - 1);
    double h_below = 0.0;
    for (double mass : h) h_below += mass;
    const double h_absorb = 1.0 - h_below;  // P(D >= k)

    // alive[s] = P(partial sums valid so far, current sum = i + s), s < k - i;
    // success absorbs once the running sum reaches k.
    std::vector<double> alive(1, 1.0);
    double success = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        std::vector<double> next(k, 0.0);
        for (std::size_t s = 0; s < alive.size(); ++s) {
            const double mass = alive[s];
            if (mass == 0.0) continue;
            // running sum before bin i is (i - 1) + s; need sum >= i after.
            const std::size_t sum_before = i - 1 + s;
            for (std::size_t d = 0; d < h.size(); ++d) {
                const std::size_t sum_after = sum_before + d;
                if (sum_after < i) continue;  // failed path
                if (sum_after >= k) {
                    success += mass * h[d];
                } else {
                    next[sum_after - i] += mass * h[d];
                }
            }
            success += mass * h_absorb;  // jump straight past k
        }
        alive.swap(next);
    }
    return success;
}

double ld_rate(const WeightProfile& weights, double gamma) {
    if (!(gamma > 1.0)) throw std::domain_error("ld_rate requires gamma > 1");
    double sum = 0.0;
    bool any_positive = false;
    const double expo = gamma / (gamma - 1.0);
    for (const auto& e : weights.entries()) {
        if (e.value < 0.0) throw std::domain_error("ld_rate requires nonnegative weights");
        if (e.value > 0.0) {
            sum += std::pow(e.value, expo);
            any_positive = true;
        }
    }
    if (!any_positive) throw std::domain_error("ld_rate requires a positive weight");
    return std::pow(sum, -(gamma - 1.0));
}

Thm36Reference thm36_reference_pi(const GaussianWindowModel& model, double d,
                                  std::uint64_t mc_budget, const RandomStream& stream) {
    if (!(d > 0.0)) throw std::domain_error("thm36_reference_pi requires d > 0");
    if (mc_budget == 0) throw std::invalid_argument("thm36_reference_pi requires draws");
    const std::size_t dim = 2 * model.r;
    const ErrorModel std_normal = Gaussian{1.0};
    Pcg64 engine = stream.engine();
    std::vector<std::uint64_t> tally(dim + 1, 0);
    Eigen::VectorXd g(static_cast<Eigen::Index>(dim));
    for (std::uint64_t it = 0; it < mc_budget; ++it) {
        const double z = -std::log(engine.uniform());  // Exp(1)
        for (std::size_t p = 0; p < dim; ++p) {
            g(static_cast<Eigen::Index>(p)) = draw_value(std_normal, engine);
        }
        const Eigen::VectorXd zvec = model.factor * g;
        std::size_t count = 0;
        for (std::size_t p = 0; p < dim; ++p) {
            const int i = model.index_at(p);
            const double ci = model.c[static_cast<std::size_t>(i < 0 ? -i : i) - 1];
            if (zvec(static_cast<Eigen::Index>(p)) > d * ci - z / d) ++count;
        }
        ++tally[count];
    }
    Thm36Reference out;
    out.draws = mc_budget;
    out.pi.resize(dim + 1);
    out.se.resize(dim + 1);
    const double n = static_cast<double>(mc_budget);
    for (std::size_t kk = 0; kk <= dim; ++kk) {
        const double p = static_cast<double>(tally[kk]) / n;
        out.pi[kk] = p;
        out.se[kk] = std::sqrt(p * (1.0 - p) / n);
    }
    return out;
}

std::vector<double> thm36_empirical_pi(const GaussianWindowModel& model, double t,
                                       std::uint64_t budget, const RandomStream& stream) {
    if (budget == 0) throw std::invalid_argument("thm36_empirical_pi requires draws");
    const std::size_t dim = 2 * model.r;
    std::vector<std::uint64_t> tally(dim + 1, 0);
    for (std::uint64_t it = 0; it < budget; ++it) {
        const WindowSample sample =
            sample_window_conditional(model, t, stream.child(it));
        std::size_t count = 0;
        for (double neighbor : sample.neighbors) {
            if (neighbor > t) ++count;
        }
        ++tally[count];
    }
    std::vector<double> pi(dim + 1);
    for (std::size_t kk = 0; kk <= dim; ++kk) {
        pi[kk] = static_cast<double>(tally[kk]) / static_cast<double>(budget);
    }
    return pi;
}

}  // namespace mtlab
