// Acceptance gate for the simulation laboratory. Each numbered criterion
// prints exactly one PASS/FAIL line with the measured quantities; the process
// exit code is the number of failed criteria. All reference values are
// produced by the independent oracles in oracles.hpp or by closed forms
// computed inline, never by the code paths under test.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mtlab/calibration.hpp"
#include "mtlab/clusters.hpp"
#include "mtlab/error_model.hpp"
#include "mtlab/experiment.hpp"
#include "mtlab/limit_laws.hpp"
#include "mtlab/procedures.hpp"
#include "mtlab/process.hpp"
#include "mtlab/rng.hpp"
#include "mtlab/weights.hpp"
#include "mtlab/window_model.hpp"
#include "oracles.hpp"

using namespace mtlab;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* format, ...) {
    char buf[1024];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return std::string(buf);
}

void guarded(std::initializer_list<int> ids, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& err) {
        for (int id : ids) report(id, false, std::string("exception: ") + err.what());
    }
}

double pmf_at(const std::map<std::size_t, double>& pmf, std::size_t q) {
    const auto it = pmf.find(q);
    return it == pmf.end() ? 0.0 : it->second;
}

// ---------------------------------------------------------------------------
// criteria 1 and 2: independence baseline and its Poisson character
// ---------------------------------------------------------------------------

void criteria_1_2() {
    const std::size_t nu = 10000;
    const std::size_t reps = 10000;
    const double alpha = 0.05;
    const double beta = beta_from_alpha(alpha);

    const ThresholdLadder ladder = threshold_ladder(ErrorModel(Gaussian{1.0}), alpha, nu, 1);
    const double t = ladder.thresholds.front();
    const double t_oracle = oracles::normal_upper_quantile(beta / static_cast<double>(nu));

    const WeightProfile weights = WeightProfile::equal(1);
    const ErrorModel error = Gaussian{1.0};
    const RandomStream base{101, 1};

    std::vector<std::size_t> n_samples(reps, 0);
    std::vector<double> positions;
    for (std::size_t i = 0; i < reps; ++i) {
        const std::vector<double> series =
            generate_ma(weights, error, nu, base.child(static_cast<std::uint64_t>(i)));
        const std::vector<std::size_t> idx = exceedance_indices(series, t);
        n_samples[i] = idx.size();
        for (std::size_t j : idx) {
            positions.push_back(static_cast<double>(j) / static_cast<double>(nu));
        }
    }

    std::size_t n_pos = 0, n_multi = 0;
    for (std::size_t n : n_samples) {
        if (n > 0) ++n_pos;
        if (n > 1) ++n_multi;
    }
    const double p_multi = static_cast<double>(n_multi) / static_cast<double>(reps);
    const double fwer = static_cast<double>(n_pos) / static_cast<double>(reps);
    const double clustering = clustering_proportion(n_samples).value_or(-1.0);

    const bool ok1 = std::fabs(t - t_oracle) <= 1e-8 && p_multi >= 0.0005 &&
                     p_multi <= 0.0025 && fwer >= 0.044 && fwer <= 0.056 &&
                     clustering >= 0.015 && clustering <= 0.036;
    report(1, ok1,
           fmt("independence baseline (nu=10^4, 10^4 reps): P(N>1)=%.5f in [0.0005,0.0025], "
               "FWER=%.4f in [0.044,0.056], clustering=%.4f in [0.015,0.036], "
               "t1=%.9f (oracle gap %.2e)",
               p_multi, fwer, clustering, t, std::fabs(t - t_oracle)));

    const double dispersion = dispersion_index(n_samples).value_or(-1.0);
    const double ks_d = ks_uniform(positions);
    const double ks_p = ks_pvalue(ks_d, positions.size());
    const bool ok2 = dispersion >= 0.90 && dispersion <= 1.10 && ks_p >= 0.01;
    report(2, ok2,
           fmt("Poisson character: dispersion=%.4f in [0.90,1.10]; pooled spacings "
               "(%zu exceedances): KS d=%.4f, p=%.3f >= 0.01",
               dispersion, positions.size(), ks_d, ks_p));
}

// ---------------------------------------------------------------------------
// criterion 3: light tails lose their clustering as df and nu grow
// ---------------------------------------------------------------------------

void criterion_3() {
    const double inf = std::numeric_limits<double>::infinity();
    ExperimentSpec spec;
    spec.model = ModelKind::model1;
    spec.nu = {500, 2000, 10000};
    spec.r = {3};
    spec.df = {3.0, inf};
    spec.repetitions = 2000;
    spec.calibration_budget = 20000000;
    spec.master_seed = 103;
    spec.threads = 1;
    const GridResult grid = run_grid(spec);

    auto cell = [&](std::size_t nu, double df) -> const ResultRow* {
        for (const ResultRow& row : grid.rows) {
            const bool df_match = (std::isinf(df) && std::isinf(row.df)) || row.df == df;
            if (row.nu == nu && df_match) return &row;
        }
        return nullptr;
    };

    bool ok = grid.failures.empty() && grid.rows.size() == 6;
    std::string detail = "r=3, 2000 reps:";
    std::vector<double> gaussian_trend;
    std::vector<std::size_t> gaussian_pos;
    for (std::size_t nu : spec.nu) {
        const ResultRow* heavy = cell(nu, 3.0);
        const ResultRow* light = cell(nu, inf);
        if (heavy == nullptr || light == nullptr ||
            !heavy->clustering_proportion.has_value() ||
            !light->clustering_proportion.has_value()) {
            ok = false;
            break;
        }
        const double ch = *heavy->clustering_proportion;
        const double cl = *light->clustering_proportion;
        ok = ok && cl < ch;
        gaussian_trend.push_back(cl);
        gaussian_pos.push_back(light->n_pos);
        detail += fmt(" nu=%zu df3=%.3f > gauss=%.3f;", nu, ch, cl);
    }
    if (gaussian_trend.size() == 3) {
        // nonincreasing in nu, judged against the binomial noise of the two
        // cells being compared (the cells are unpaired across nu)
        for (std::size_t i = 1; i < 3; ++i) {
            const double pa = gaussian_trend[i - 1];
            const double pb = gaussian_trend[i];
            const double pbar = 0.5 * (pa + pb);
            const double slack =
                3.0 * std::sqrt(pbar * (1.0 - pbar) *
                                (1.0 / static_cast<double>(gaussian_pos[i - 1]) +
                                 1.0 / static_cast<double>(gaussian_pos[i])));
            ok = ok && pb <= pa + slack;
        }
        ok = ok && gaussian_trend[2] <= gaussian_trend[0];
        detail += fmt(" gauss trend %.3f, %.3f, %.3f nonincreasing within 3 SE",
                      gaussian_trend[0], gaussian_trend[1], gaussian_trend[2]);
    } else {
        ok = false;
    }
    report(3, ok, detail);
}

// ---------------------------------------------------------------------------
// criteria 4 and 5: heavy Weibull tails, with and without tied maxima
// ---------------------------------------------------------------------------

void criterion_4() {
    const double gamma = 0.5;
    const ErrorModel error = WeibullTail{gamma, 1.0};
    const WeightProfile weights = WeightProfile::from_values({1.0, 1.0});
    const auto surv = [&](double x) {
        return oracles::weibull_pair_survival(1.0, 1.0, gamma, 1.0, x);
    };
    const double x4 = oracles::invert_survival(surv, 1e-4);
    const double x5 = oracles::invert_survival(surv, 1e-5);

    const std::size_t nu = 100000;
    const std::size_t batches = 3000;
    const SeriesSource source = [&](const RandomStream& stream) {
        return generate_ma(weights, error, nu, stream);
    };
    // shared stream: both levels scan the same realizations, pairing the
    // comparison between levels
    const ClusterHistogram h4 =
        conditional_window_histogram(source, x4, 1, batches, RandomStream{104, 0});
    const ClusterHistogram h5 =
        conditional_window_histogram(source, x5, 1, batches, RandomStream{104, 0});
    const double p4 = pmf_at(h4.pmf(), 2);
    const double p5 = pmf_at(h5.pmf(), 2);

    const bool ok = h4.total >= 2000 && h5.total >= 500 && p4 >= 0.8 && p5 > p4;
    report(4, ok,
           fmt("tied maxima (Weibull gamma=0.5, theta=(1,1)): P(M=2)=%.4f at survival 1e-4 "
               "(%zu records, level %.2f) rising to %.4f at 1e-5 (%zu records, level %.2f)",
               p4, h4.total, x4, p5, h5.total, x5));
}

void criterion_5() {
    const double gamma = 0.5;
    const ErrorModel error = WeibullTail{gamma, 1.0};
    const WeightProfile weights = WeightProfile::from_values({2.0, 1.0});
    const auto surv = [&](double x) {
        return oracles::weibull_pair_survival(2.0, 1.0, gamma, 1.0, x);
    };
    const double x5 = oracles::invert_survival(surv, 1e-5);

    const std::size_t nu = 100000;
    const std::size_t batches = 2000;
    const SeriesSource source = [&](const RandomStream& stream) {
        return generate_ma(weights, error, nu, stream);
    };
    const ClusterHistogram hist =
        conditional_window_histogram(source, x5, 1, batches, RandomStream{105, 0});
    const double p1 = pmf_at(hist.pmf(), 1);
    const bool ok = hist.total >= 500 && p1 >= 0.9;
    report(5, ok,
           fmt("unique maximum (Weibull gamma=0.5, theta=(2,1)): P(M=1)=%.4f >= 0.9 at "
               "survival 1e-5 (%zu records, level %.2f)",
               p1, hist.total, x5));
}

// ---------------------------------------------------------------------------
// criterion 6: Pareto per-cluster size law
// ---------------------------------------------------------------------------

void criterion_6() {
    const double rho = 2.0;
    const ErrorModel error = Pareto{rho, 1.0};
    const WeightProfile weights = WeightProfile::from_values({2.0, 1.0});
    const auto surv = [&](double x) {
        return oracles::pareto_pair_survival(2.0, 1.0, rho, 1.0, x);
    };
    const double x5 = oracles::invert_survival(surv, 1e-5);

    const std::size_t nu = 100000;
    const std::size_t batches = 2600;
    const SeriesSource source = [&](const RandomStream& stream) {
        return generate_ma(weights, error, nu, stream);
    };
    const ClusterHistogram hist =
        conditional_window_histogram(source, x5, 1, batches, RandomStream{106, 0});

    const std::map<std::size_t, double> pmf = hist.per_cluster_pmf();
    // limiting per-cluster law for theta=(2,1), rho=2
    const std::map<std::size_t, double> target{{1, 0.75}, {2, 0.25}};
    std::set<std::size_t> support{1, 2};
    for (const auto& [q, p] : pmf) support.insert(q);
    double tv = 0.0;
    for (std::size_t q : support) {
        const auto want = target.find(q);
        tv += std::fabs(pmf_at(pmf, q) - (want == target.end() ? 0.0 : want->second));
    }
    tv *= 0.5;
    const bool ok = hist.total >= 2000 && tv <= 0.05;
    report(6, ok,
           fmt("Pareto cluster law (theta=(2,1), rho=2): per-cluster pmf {1:%.4f, 2:%.4f} vs "
               "{1:0.75, 2:0.25}, TV=%.4f <= 0.05 with %zu records (>= 2000)",
               pmf_at(pmf, 1), pmf_at(pmf, 2), tv, hist.total));
}

// ---------------------------------------------------------------------------
// criterion 7: the compound-Poisson correction beats the plain Poisson tail
// ---------------------------------------------------------------------------

void criterion_7() {
    const double rho = 2.0;
    const ErrorModel error = Pareto{rho, 1.0};
    const WeightProfile weights = WeightProfile::from_values({2.0, 1.0});
    const std::size_t nu = 10000;
    const std::size_t reps = 100000;
    const double beta = beta_from_alpha(0.05);

    const auto surv = [&](double x) {
        return oracles::pareto_pair_survival(2.0, 1.0, rho, 1.0, x);
    };
    const double t = oracles::invert_survival(surv, beta / static_cast<double>(nu));
    const ClusterSizePmf pmf = cluster_size_pmf(weights, rho);

    const RandomStream base{107, 0};
    std::vector<std::size_t> hits(5, 0);  // hits[k] = #{N >= k}, k = 1..4
    for (std::size_t rep = 0; rep < reps; ++rep) {
        const std::vector<double> series =
            generate_ma(weights, error, nu, base.child(static_cast<std::uint64_t>(rep)));
        const std::size_t n = count_exceedances(series, t);
        for (std::size_t k = 1; k <= 4; ++k) {
            if (n >= k) ++hits[k];
        }
    }

    bool compound_ok = true;
    bool poisson_fails = false;
    std::string detail = fmt("Pareto at nu=10^4, %zu reps:", reps);
    for (std::size_t k = 1; k <= 4; ++k) {
        const double phat = static_cast<double>(hits[k]) / static_cast<double>(reps);
        const double pc = compound_tail(beta, pmf, k);
        const double se_c = std::sqrt(pc * (1.0 - pc) / static_cast<double>(reps));
        const bool k_ok = std::fabs(phat - pc) <= 3.0 * se_c;
        compound_ok = compound_ok && k_ok;
        const double pp = poisson_tail(beta, k);
        const double se_p = std::sqrt(pp * (1.0 - pp) / static_cast<double>(reps));
        const bool k_poisson_rejected = std::fabs(phat - pp) > 3.0 * se_p;
        poisson_fails = poisson_fails || k_poisson_rejected;
        detail += fmt(" k=%zu: %.5f vs compound %.5f (%s), poisson %.5f (%s);", k, phat, pc,
                      k_ok ? "ok" : "OFF", pp, k_poisson_rejected ? "rejected" : "not rej");
    }
    report(7, compound_ok && poisson_fails, detail);
}

// ---------------------------------------------------------------------------
// criterion 8: step-down false-rejection limits
// ---------------------------------------------------------------------------

void criterion_8() {
    const double quoted_beta = 0.0512933;
    bool dominated = true;
    for (std::size_t k = 1; k <= 20; ++k) {
        if (!(fdr_limit_prob(quoted_beta, k) <= quoted_beta)) dominated = false;
    }

    const double v2 = fdr_limit_prob(quoted_beta, 2);
    const double enum2 =
        oracles::poisson_tail_series(quoted_beta, 2) +
        oracles::poisson_pmf(quoted_beta, 1) * oracles::poisson_tail_series(quoted_beta, 1);
    const bool k2_ok = std::fabs(v2 - enum2) <= 1e-6;

    // MC of the step-down top-k rejection events at independence
    const std::size_t nu = 2000;
    const std::size_t reps = 200000;
    const double alpha = 0.05;
    const double beta = beta_from_alpha(alpha);
    const ThresholdLadder ladder = threshold_ladder(ErrorModel(Gaussian{1.0}), alpha, nu, 3);
    const double t1 = ladder.thresholds[0];
    const double t2 = ladder.thresholds[1];
    const double t3 = ladder.thresholds[2];

    const RandomStream base{108, 0};
    std::vector<std::size_t> hits(4, 0);  // hits[k] = #{k_star >= k}
    for (std::size_t rep = 0; rep < reps; ++rep) {
        Drawer drawer(Gaussian{1.0}, base.child(static_cast<std::uint64_t>(rep)));
        double a1 = -1e300, a2 = -1e300, a3 = -1e300;
        for (std::size_t i = 0; i < nu; ++i) {
            const double v = drawer.next();
            if (v > a3) {
                if (v > a1) {
                    a3 = a2;
                    a2 = a1;
                    a1 = v;
                } else if (v > a2) {
                    a3 = a2;
                    a2 = v;
                } else {
                    a3 = v;
                }
            }
        }
        if (a1 > t1) {
            ++hits[1];
            if (a2 > t2) {
                ++hits[2];
                if (a3 > t3) ++hits[3];
            }
        }
    }

    bool mc_ok = true;
    std::string mc_detail;
    for (std::size_t k = 1; k <= 3; ++k) {
        const double phat = static_cast<double>(hits[k]) / static_cast<double>(reps);
        const double dp = fdr_limit_prob(beta, k);
        const double se = std::sqrt(dp * (1.0 - dp) / static_cast<double>(reps));
        if (std::fabs(phat - dp) > 3.0 * se) mc_ok = false;
        mc_detail += fmt(" k=%zu: %.2e vs %.2e;", k, phat, dp);
    }

    report(8, dominated && k2_ok && mc_ok,
           fmt("fdr limits: dominated by beta for k<=20 (%s); k=2 value %.8f vs enumeration "
               "%.8f (gap %.1e <= 1e-6, %s); step-down MC at nu=2000:%s (%s)",
               dominated ? "yes" : "NO", v2, enum2, std::fabs(v2 - enum2),
               k2_ok ? "ok" : "OFF", mc_detail.c_str(), mc_ok ? "ok" : "OFF"));
}

// ---------------------------------------------------------------------------
// criterion 9: highly correlated Gaussian windows
// ---------------------------------------------------------------------------

void criterion_9() {
    const double d = 1.0;
    const ThresholdLadder ladder =
        threshold_ladder(ErrorModel(Gaussian{1.0}), 0.05, 10000, 1);
    const double t = ladder.thresholds.front();
    const double delta = (d / t) * (d / t);

    const GaussianWindowModel model = build_window_model(1, {0.5, 0.5}, delta);
    const std::vector<double> pi = thm36_empirical_pi(model, t, 1000000, RandomStream{109, 1});
    const Thm36Reference ref = thm36_reference_pi(model, d, 10000000, RandomStream{109, 2});

    bool ok = true;
    std::string detail = fmt("window law at t=%.4f, delta=%.5f:", t, delta);
    for (std::size_t k = 0; k <= 2; ++k) {
        const double gap = std::fabs(pi[k] - ref.pi[k]);
        if (gap > 0.05) ok = false;
        detail += fmt(" pi_%zu=%.4f vs ref %.4f (gap %.4f);", k, pi[k], ref.pi[k], gap);
    }

    const GaussianWindowModel degenerate = build_window_model(1, {0.0, 0.0}, delta);
    const std::vector<double> pi0 =
        thm36_empirical_pi(degenerate, t, 100000, RandomStream{109, 3});
    const Thm36Reference ref0 =
        thm36_reference_pi(degenerate, d, 100000, RandomStream{109, 4});
    const bool degenerate_ok = pi0[2] == 1.0 && ref0.pi[2] == 1.0;
    detail += fmt(" degenerate c=0: pi_2=%g, ref %g", pi0[2], ref0.pi[2]);
    report(9, ok && degenerate_ok, detail);
}

// ---------------------------------------------------------------------------
// criterion 10: exhaustive oracle equivalence on randomized small instances
// ---------------------------------------------------------------------------

void criterion_10() {
    Pcg64 engine(110, 0);
    const std::size_t instances = 10000;
    std::size_t checks = 0;
    std::size_t discrepancies = 0;

    for (std::size_t inst = 0; inst < instances; ++inst) {
        const std::size_t nu = 1 + static_cast<std::size_t>(engine.uniform() * 8.0);
        std::vector<double> series(nu);
        for (double& v : series) {
            // half-integer lattice in [-1, 3.5]; ties and threshold hits common
            v = std::floor(engine.uniform() * 10.0) / 2.0 - 1.0;
        }
        const std::size_t depth = 1 + static_cast<std::size_t>(engine.uniform() * 4.0);
        std::vector<double> thresholds;
        double level = 3.5 - 0.5 * std::floor(engine.uniform() * 3.0);
        for (std::size_t i = 0; i < depth; ++i) {
            thresholds.push_back(level);
            level -= 0.5 * (1.0 + std::floor(engine.uniform() * 3.0));
        }
        ThresholdLadder ladder;
        ladder.thresholds = thresholds;
        ladder.se.assign(thresholds.size(), 0.0);
        ladder.beta = 0.05;
        ladder.nu = nu;

        // count_exceedances
        ++checks;
        if (count_exceedances(series, thresholds[0]) !=
            oracles::bf_count_exceedances(series, thresholds[0])) {
            ++discrepancies;
        }

        // bin_counts: bins, cumulative partial sums, and n
        ++checks;
        const TestCounts counts = bin_counts(series, ladder);
        const std::vector<std::size_t> bf_bins = oracles::bf_bin_counts(series, thresholds);
        bool bins_ok = counts.bins == bf_bins &&
                       counts.n == oracles::bf_count_exceedances(series, thresholds[0]);
        std::size_t running = 0;
        for (std::size_t i = 0; i < counts.bins.size(); ++i) {
            running += counts.bins[i];
            if (counts.cumulative[i] != running) bins_ok = false;
        }
        if (!bins_ok) ++discrepancies;

        // stepdown_reject: k_star and the rejected index set
        ++checks;
        const RejectionResult rejection = stepdown_reject(series, ladder);
        const std::size_t bf_k = oracles::bf_stepdown_kstar(series, thresholds);
        bool step_ok = rejection.k_star == bf_k;
        std::vector<std::pair<double, std::size_t>> ranked;
        for (std::size_t i = 0; i < nu; ++i) ranked.push_back({series[i], i + 1});
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        std::vector<std::size_t> bf_rejected;
        for (std::size_t i = 0; i < bf_k; ++i) bf_rejected.push_back(ranked[i].second);
        std::sort(bf_rejected.begin(), bf_rejected.end());
        if (rejection.rejected != bf_rejected) step_ok = false;
        if (!step_ok) ++discrepancies;

        // window_count at a random admissible center and a lattice level
        const std::size_t r = static_cast<std::size_t>(engine.uniform() * 3.0);
        if (nu >= 2 * r + 1) {
            ++checks;
            const std::size_t span = nu - 2 * r;
            const std::size_t i0 =
                1 + r + static_cast<std::size_t>(engine.uniform() * static_cast<double>(span));
            const double x = thresholds[static_cast<std::size_t>(
                engine.uniform() * static_cast<double>(depth))];
            if (window_count(series, i0, r, x) != oracles::bf_window_count(series, i0, r, x)) {
                ++discrepancies;
            }
        }

        // run_clusters over the exceedance index set
        ++checks;
        const std::vector<std::size_t> indices = exceedance_indices(series, thresholds[0]);
        const std::size_t gap = 1 + static_cast<std::size_t>(engine.uniform() * 3.0);
        const std::vector<std::size_t> sizes = run_clusters(indices, gap);
        bool run_ok = sizes == oracles::bf_run_clusters(indices, gap);
        std::size_t total = 0;
        for (std::size_t s : sizes) total += s;
        if (total != indices.size()) run_ok = false;
        if (!run_ok) ++discrepancies;
    }

    report(10, discrepancies == 0,
           fmt("oracle equivalence: %zu randomized instances, %zu checks, %zu discrepancies",
               instances, checks, discrepancies));
}

// ---------------------------------------------------------------------------
// criterion 11: CSV output is byte-identical across thread counts
// ---------------------------------------------------------------------------

void criterion_11() {
    namespace fs = std::filesystem;
    const char* cli = std::getenv("MTLAB_CLI");
    if (cli == nullptr || std::string(cli).empty()) {
        report(11, false, "MTLAB_CLI environment variable not set; cannot spawn the CLI");
        return;
    }

    const fs::path dir = fs::temp_directory_path() / "mtlab_acceptance_run";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path config_path = dir / "config.json";
    {
        std::ofstream out(config_path);
        out << R"({
  "model": "model1",
  "nu": [500],
  "r": [1, 3],
  "df": [4, "inf"],
  "repetitions": 200,
  "calibration": {"method": "auto", "budget": 1000000},
  "master_seed": 1,
  "threads": 1
})";
    }

    std::vector<std::string> csvs;
    bool spawned = true;
    for (int threads : {1, 4, 16}) {
        const fs::path out_dir = dir / ("out" + std::to_string(threads));
        const std::string cmd = "\"" + std::string(cli) + "\" run --config \"" +
                                config_path.string() + "\" --out \"" + out_dir.string() +
                                "\" --threads " + std::to_string(threads) + " > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        if (rc != 0) {
            spawned = false;
            break;
        }
        std::ifstream in(out_dir / "grid.csv", std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        csvs.push_back(buf.str());
    }

    const bool ok = spawned && csvs.size() == 3 && !csvs[0].empty() && csvs[0] == csvs[1] &&
                    csvs[0] == csvs[2];
    report(11, ok,
           spawned ? fmt("run at threads 1/4/16: %zu-byte CSVs, byte-identical: %s",
                         csvs.empty() ? 0 : csvs[0].size(), ok ? "yes" : "NO")
                   : "CLI run returned a nonzero exit code");
    fs::remove_all(dir);
}

}  // namespace

int main() {
    std::printf("acceptance suite: 11 criteria\n");
    guarded({1, 2}, criteria_1_2);
    guarded({3}, criterion_3);
    guarded({4}, criterion_4);
    guarded({5}, criterion_5);
    guarded({6}, criterion_6);
    guarded({7}, criterion_7);
    guarded({8}, criterion_8);
    guarded({9}, criterion_9);
    guarded({10}, criterion_10);
    guarded({11}, criterion_11);
    std::printf("acceptance summary: %d of 11 criteria failed\n", g_failures);
    return g_failures;
}
