// Command-line front end: calibration, grid runs, cluster scans, limit-law
// evaluation and figure reproduction, all on top of the mtlab library.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "mtlab/calibration.hpp"
#include "mtlab/clusters.hpp"
#include "mtlab/errors.hpp"
#include "mtlab/experiment.hpp"
#include "mtlab/limit_laws.hpp"
#include "mtlab/process.hpp"
#include "mtlab/window_model.hpp"

namespace {

using nlohmann::json;

struct ErrorFlags {
    std::string kind = "gaussian";
    double sd = 1.0;
    double df = 5.0;
    double scale = 1.0;
    double gamma = 0.5;
    double rate_c = 1.0;
    double rho = 2.0;
    double xmin = 1.0;
};

void add_error_flags(CLI::App* cmd, ErrorFlags& flags) {
    cmd->add_option("--error", flags.kind, "error distribution")
        ->check(CLI::IsMember({"gaussian", "student-t", "weibull-tail", "pareto"}))
        ->capture_default_str();
    cmd->add_option("--sd", flags.sd, "gaussian standard deviation")->capture_default_str();
    cmd->add_option("--df", flags.df, "student-t degrees of freedom")->capture_default_str();
    cmd->add_option("--scale", flags.scale, "student-t scale")->capture_default_str();
    cmd->add_option("--gamma", flags.gamma, "weibull-tail exponent")->capture_default_str();
    cmd->add_option("--rate-c", flags.rate_c, "weibull-tail rate constant")
        ->capture_default_str();
    cmd->add_option("--rho", flags.rho, "pareto exponent")->capture_default_str();
    cmd->add_option("--xmin", flags.xmin, "pareto lower endpoint")->capture_default_str();
}

mtlab::ErrorModel make_error(const ErrorFlags& flags) {
    mtlab::ErrorModel model;
    if (flags.kind == "gaussian") {
        model = mtlab::Gaussian{flags.sd};
    } else if (flags.kind == "student-t") {
        model = mtlab::StudentT{flags.df, flags.scale};
    } else if (flags.kind == "weibull-tail") {
        model = mtlab::WeibullTail{flags.gamma, flags.rate_c};
    } else {
        model = mtlab::Pareto{flags.rho, flags.xmin};
    }
    try {
        mtlab::validate(model);
    } catch (const std::invalid_argument& err) {
        throw mtlab::ConfigError(err.what());
    }
    return model;
}

mtlab::WeightProfile make_weights(const std::vector<double>& values, std::size_t r) {
    try {
        if (!values.empty()) return mtlab::WeightProfile::from_values(values);
        return mtlab::WeightProfile::equal(r);
    } catch (const std::invalid_argument& err) {
        throw mtlab::ConfigError(err.what());
    }
}

mtlab::ClusterSizePmf make_pmf(const std::vector<double>& pmf_values,
                               const std::vector<double>& weight_values, double rho) {
    if (!pmf_values.empty()) {
        double total = 0.0;
        double mu = 0.0;
        for (std::size_t q = 0; q < pmf_values.size(); ++q) {
            if (pmf_values[q] < 0.0) throw mtlab::ConfigError("pmf entries must be >= 0");
            total += pmf_values[q];
            mu += static_cast<double>(q + 1) * pmf_values[q];
        }
        if (std::fabs(total - 1.0) > 1e-9) {
            throw mtlab::ConfigError("pmf entries must sum to 1");
        }
        return mtlab::ClusterSizePmf{pmf_values, mu};
    }
    if (weight_values.empty()) {
        throw mtlab::ConfigError("provide either --pmf or --weights with --rho");
    }
    return mtlab::cluster_size_pmf(mtlab::WeightProfile::from_values(weight_values), rho);
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int dispatch(int argc, char** argv) {
    CLI::App app{"mtlab: simulation laboratory for multiple-testing limit laws"};
    app.require_subcommand(1);

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "compute a critical-value ladder");
    std::string cal_model = "model1";
    std::size_t cal_n = 10, cal_nu = 0, cal_r = 1, cal_k = 1;
    std::vector<double> cal_weights;
    double cal_alpha = 0.05;
    std::string cal_method = "auto";
    std::uint64_t cal_budget = 20000000, cal_seed = 1;
    unsigned cal_threads = 1;
    bool cal_sidak = false, cal_raw = false;
    ErrorFlags cal_error;
    calibrate->add_option("--model", cal_model)
        ->check(CLI::IsMember({"model1", "model2"}))
        ->capture_default_str();
    calibrate->add_option("--n", cal_n, "group size (model2)")->capture_default_str();
    calibrate->add_option("--nu", cal_nu, "number of tests")->required();
    calibrate->add_option("--r", cal_r, "number of equal weights")->capture_default_str();
    calibrate->add_option("--weights", cal_weights, "explicit weights at offsets 0,1,...")
        ->delimiter(',');
    calibrate->add_option("--k", cal_k, "ladder depth")->capture_default_str();
    calibrate->add_option("--alpha", cal_alpha)->capture_default_str();
    calibrate->add_option("--method", cal_method)
        ->check(CLI::IsMember({"auto", "analytic", "monte_carlo"}))
        ->capture_default_str();
    calibrate->add_option("--budget", cal_budget, "Monte Carlo draws")->capture_default_str();
    calibrate->add_option("--seed", cal_seed)->capture_default_str();
    calibrate->add_option("--threads", cal_threads)->capture_default_str();
    calibrate->add_flag("--sidak", cal_sidak, "Sidak first rung instead of beta/nu");
    calibrate->add_flag("--raw-weights", cal_raw, "skip unit-variance normalization");
    add_error_flags(calibrate, cal_error);
    calibrate->callback([&] {
        const mtlab::ErrorModel error = make_error(cal_error);
        mtlab::WeightProfile weights = make_weights(cal_weights, cal_r);
        if (!cal_raw) weights = mtlab::unit_variance_scale(weights, error);
        const auto convention = cal_sidak ? mtlab::LadderConvention::sidak
                                          : mtlab::LadderConvention::beta_over_nu;
        mtlab::ErrorModel marginal;
        const bool analytic = cal_model == "model1"
                                  ? mtlab::analytic_ma_marginal(weights, error, marginal)
                                  : mtlab::analytic_t_marginal(error, cal_n, marginal);
        if (cal_method == "analytic" && !analytic) {
            throw mtlab::ConfigError("no closed-form marginal for this configuration");
        }
        mtlab::ThresholdLadder ladder;
        if (analytic && cal_method != "monte_carlo") {
            ladder = mtlab::threshold_ladder(marginal, cal_alpha, cal_nu, cal_k, convention);
        } else {
            const mtlab::StatSampler sampler =
                cal_model == "model1" ? mtlab::model1_stat_sampler(weights, error)
                                      : mtlab::model2_stat_sampler(weights, error, cal_n);
            ladder = mtlab::threshold_ladder(sampler, cal_alpha, cal_nu, cal_k, cal_budget,
                                             mtlab::RandomStream{cal_seed, 0}, cal_threads,
                                             convention);
        }
        json out{{"alpha", cal_alpha},
                 {"beta", ladder.beta},
                 {"nu", ladder.nu},
                 {"convention", cal_sidak ? "sidak" : "beta_over_nu"},
                 {"method", ladder.method.kind == mtlab::CalibrationMethod::Kind::analytic
                                ? "analytic"
                                : "monte_carlo"},
                 {"thresholds", ladder.thresholds},
                 {"se", ladder.se}};
        if (ladder.method.kind == mtlab::CalibrationMethod::Kind::monte_carlo) {
            out["budget"] = ladder.method.budget;
        }
        emit(out);
    });

    // run
    auto* run = app.add_subcommand("run", "run an experiment grid from a JSON config");
    std::string run_config, run_out;
    unsigned run_threads = 0;
    std::uint64_t run_seed = 0;
    bool run_seed_set = false, run_threads_set = false;
    run->add_option("--config", run_config, "path to JSON config")->required();
    run->add_option("--out", run_out, "output directory")->required();
    auto* run_threads_opt = run->add_option("--threads", run_threads, "override threads");
    auto* run_seed_opt = run->add_option("--seed", run_seed, "override master seed");
    run->callback([&] {
        run_threads_set = run_threads_opt->count() > 0;
        run_seed_set = run_seed_opt->count() > 0;
        std::ifstream in(run_config, std::ios::binary);
        if (!in) throw mtlab::ConfigError("cannot read config file " + run_config);
        std::ostringstream text;
        text << in.rdbuf();
        mtlab::ExperimentSpec spec = mtlab::parse_experiment_spec(text.str());
        if (run_threads_set) spec.threads = run_threads == 0 ? 1 : run_threads;
        if (run_seed_set) spec.master_seed = run_seed;
        const mtlab::GridResult result = mtlab::run_grid(spec);
        std::error_code ec;
        std::filesystem::create_directories(run_out, ec);
        if (ec) throw std::runtime_error("cannot create " + run_out + ": " + ec.message());
        const auto csv_path = std::filesystem::path(run_out) / "grid.csv";
        const auto meta_path = std::filesystem::path(run_out) / "metadata.json";
        {
            std::ofstream out(csv_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + csv_path.string());
            out << mtlab::grid_csv(result);
        }
        {
            std::ofstream out(meta_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + meta_path.string());
            out << mtlab::grid_metadata_json(spec, result);
        }
        std::cout << csv_path.string() << "\n" << meta_path.string() << "\n";
    });

    // clusters
    auto* clusters = app.add_subcommand("clusters", "scan series for exceedance clusters");
    std::vector<double> clu_weights;
    double clu_survival = 1e-4;
    double clu_level = std::numeric_limits<double>::quiet_NaN();
    std::size_t clu_series = 1000, clu_nu = 1000;
    std::uint64_t clu_seed = 1, clu_budget = 20000000;
    unsigned clu_threads = 1;
    ErrorFlags clu_error;
    clusters->add_option("--weights", clu_weights, "weights at offsets 0,1,...")
        ->delimiter(',')
        ->required();
    clusters->add_option("--survival", clu_survival, "marginal survival of the scan level")
        ->capture_default_str();
    clusters->add_option("--level", clu_level, "explicit scan level (overrides --survival)");
    clusters->add_option("--series", clu_series, "number of series to scan")
        ->capture_default_str();
    clusters->add_option("--nu", clu_nu, "length of each series")->capture_default_str();
    clusters->add_option("--budget", clu_budget, "Monte Carlo level budget")
        ->capture_default_str();
    clusters->add_option("--seed", clu_seed)->capture_default_str();
    clusters->add_option("--threads", clu_threads)->capture_default_str();
    add_error_flags(clusters, clu_error);
    clusters->callback([&] {
        const mtlab::ErrorModel error = make_error(clu_error);
        const mtlab::WeightProfile weights = make_weights(clu_weights, 1);
        const mtlab::RandomStream stream{clu_seed, 0};
        double level = clu_level;
        if (std::isnan(level)) {
            mtlab::ErrorModel marginal;
            if (mtlab::analytic_ma_marginal(weights, error, marginal)) {
                level = mtlab::quantile_survival(marginal, clu_survival);
            } else {
                level = mtlab::mc_marginal_quantile(
                            mtlab::model1_stat_sampler(weights, error), clu_survival,
                            clu_budget, stream.child(0), clu_threads)
                            .t;
            }
        }
        const int span = weights.span();
        const std::size_t r = span > 0 ? static_cast<std::size_t>(span) : 0;
        const mtlab::SeriesSource source = [&](const mtlab::RandomStream& s) {
            return mtlab::generate_ma(weights, error, clu_nu, s);
        };
        const mtlab::ClusterHistogram hist =
            mtlab::conditional_window_histogram(source, level, r, clu_series, stream.child(1));
        json counts = json::object();
        for (const auto& [size, count] : hist.counts) {
            counts[std::to_string(size)] = count;
        }
        json record_pmf = json::object();
        for (const auto& [size, p] : hist.pmf()) record_pmf[std::to_string(size)] = p;
        json cluster_pmf = json::object();
        for (const auto& [size, p] : hist.per_cluster_pmf()) {
            cluster_pmf[std::to_string(size)] = p;
        }
        json out{{"level", level},
                 {"window_radius", r},
                 {"records", hist.total},
                 {"series_scanned", hist.series_scanned},
                 {"values_scanned", hist.values_scanned},
                 {"overlapping_records", hist.overlapping_records},
                 {"empty", hist.empty_warning},
                 {"counts", counts},
                 {"record_pmf", record_pmf},
                 {"per_cluster_pmf", cluster_pmf}};
        if (hist.total > 0) out["mean_record_count"] = hist.mean();
        emit(out);
    });

    // limits
    auto* limits = app.add_subcommand("limits", "evaluate limit-law quantities");
    limits->require_subcommand(1);
    double lim_alpha = 0.05;
    double lim_beta = std::numeric_limits<double>::quiet_NaN();
    std::size_t lim_k = 1;
    std::vector<double> lim_weights, lim_pmf, lim_c;
    double lim_rho = 2.0, lim_gamma = 2.0;
    std::size_t lim_r = 1;
    double lim_d = 1.0, lim_t = 0.0, lim_delta = 0.0;
    std::uint64_t lim_cond = 1000000, lim_ref = 10000000, lim_seed = 1;

    auto add_beta = [&](CLI::App* cmd) {
        cmd->add_option("--alpha", lim_alpha)->capture_default_str();
        cmd->add_option("--beta", lim_beta, "overrides --alpha");
    };
    auto beta_value = [&] {
        return std::isnan(lim_beta) ? mtlab::beta_from_alpha(lim_alpha) : lim_beta;
    };

    auto* lp = limits->add_subcommand("poisson-tail", "P(Poisson(beta) >= k)");
    add_beta(lp);
    lp->add_option("--k", lim_k)->required();
    lp->callback([&] {
        const double beta = beta_value();
        emit(json{{"beta", beta}, {"k", lim_k}, {"value", mtlab::poisson_tail(beta, lim_k)}});
    });

    auto* lf = limits->add_subcommand("fdr-limit", "limiting top-k step-down probability");
    add_beta(lf);
    lf->add_option("--k", lim_k)->required();
    lf->callback([&] {
        const double beta = beta_value();
        emit(json{{"beta", beta}, {"k", lim_k}, {"value", mtlab::fdr_limit_prob(beta, lim_k)}});
    });

    auto* lc = limits->add_subcommand("cluster-pmf", "limiting cluster-size pmf");
    lc->add_option("--weights", lim_weights)->delimiter(',')->required();
    lc->add_option("--rho", lim_rho)->capture_default_str();
    lc->callback([&] {
        const mtlab::ClusterSizePmf pmf =
            mtlab::cluster_size_pmf(mtlab::WeightProfile::from_values(lim_weights), lim_rho);
        emit(json{{"p", pmf.p}, {"mu", pmf.mu}});
    });

    auto* lct = limits->add_subcommand("compound-tail", "compound-Poisson P(N >= k)");
    add_beta(lct);
    lct->add_option("--k", lim_k)->required();
    lct->add_option("--pmf", lim_pmf, "cluster-size pmf p_1,p_2,...")->delimiter(',');
    lct->add_option("--weights", lim_weights)->delimiter(',');
    lct->add_option("--rho", lim_rho)->capture_default_str();
    lct->callback([&] {
        const double beta = beta_value();
        const mtlab::ClusterSizePmf pmf = make_pmf(lim_pmf, lim_weights, lim_rho);
        emit(json{{"beta", beta},
                  {"k", lim_k},
                  {"mu", pmf.mu},
                  {"value", mtlab::compound_tail(beta, pmf, lim_k)}});
    });

    auto* lcf = limits->add_subcommand("compound-fdr", "clustered top-k step-down probability");
    add_beta(lcf);
    lcf->add_option("--k", lim_k)->required();
    lcf->add_option("--pmf", lim_pmf, "cluster-size pmf p_1,p_2,...")->delimiter(',');
    lcf->add_option("--weights", lim_weights)->delimiter(',');
    lcf->add_option("--rho", lim_rho)->capture_default_str();
    lcf->callback([&] {
        const double beta = beta_value();
        const mtlab::ClusterSizePmf pmf = make_pmf(lim_pmf, lim_weights, lim_rho);
        emit(json{{"beta", beta},
                  {"k", lim_k},
                  {"mu", pmf.mu},
                  {"value", mtlab::compound_fdr_prob(beta, pmf, lim_k)}});
    });

    auto* lr = limits->add_subcommand("rate", "light-tail large-deviation rate");
    lr->add_option("--weights", lim_weights)->delimiter(',')->required();
    lr->add_option("--gamma", lim_gamma)->capture_default_str();
    lr->callback([&] {
        emit(json{{"gamma", lim_gamma},
                  {"value", mtlab::ld_rate(mtlab::WeightProfile::from_values(lim_weights),
                                           lim_gamma)}});
    });

    auto* lt = limits->add_subcommand("thm36", "window exceedance-count laws");
    lt->add_option("--r", lim_r)->capture_default_str();
    lt->add_option("--c", lim_c, "window coefficients c_1..c_2r")->delimiter(',')->required();
    lt->add_option("--d", lim_d)->capture_default_str();
    lt->add_option("--t", lim_t, "truncation level")->required();
    lt->add_option("--delta", lim_delta, "defaults to (d/t)^2");
    lt->add_option("--conditional", lim_cond, "conditional draws")->capture_default_str();
    lt->add_option("--reference", lim_ref, "reference draws")->capture_default_str();
    lt->add_option("--seed", lim_seed)->capture_default_str();
    lt->callback([&] {
        const double delta = lim_delta > 0.0 ? lim_delta : (lim_d / lim_t) * (lim_d / lim_t);
        mtlab::GaussianWindowModel model;
        try {
            model = mtlab::build_window_model(lim_r, lim_c, delta);
        } catch (const std::invalid_argument& err) {
            throw mtlab::ConfigError(err.what());
        }
        const mtlab::RandomStream stream{lim_seed, 0};
        const std::vector<double> pi_hat =
            mtlab::thm36_empirical_pi(model, lim_t, lim_cond, stream.child(1));
        const mtlab::Thm36Reference ref =
            mtlab::thm36_reference_pi(model, lim_d, lim_ref, stream.child(2));
        emit(json{{"delta", delta},
                  {"t", lim_t},
                  {"d", lim_d},
                  {"pi_hat", pi_hat},
                  {"pi0_hat", ref.pi},
                  {"pi0_se", ref.se}});
    });

    // reproduce
    auto* reproduce = app.add_subcommand("reproduce", "reproduce a clustering figure");
    std::string rep_figure, rep_preset;
    std::string rep_out = "figures";
    std::uint64_t rep_seed = 1;
    unsigned rep_threads = 1;
    reproduce->add_option("figure", rep_figure, "fig1 (model1) or fig2 (model2)")
        ->check(CLI::IsMember({"fig1", "fig2"}))
        ->required();
    reproduce->add_option("--preset", rep_preset, "full or reduced")
        ->check(CLI::IsMember({"full", "reduced"}))
        ->required();
    reproduce->add_option("--out", rep_out, "output directory")->capture_default_str();
    reproduce->add_option("--seed", rep_seed)->capture_default_str();
    reproduce->add_option("--threads", rep_threads)->capture_default_str();
    reproduce->callback([&] {
        mtlab::FigurePreset preset = mtlab::figure_preset(
            rep_preset == "full" ? mtlab::Preset::full : mtlab::Preset::reduced);
        preset.master_seed = rep_seed;
        preset.threads = rep_threads == 0 ? 1 : rep_threads;
        const auto figure = rep_figure == "fig1" ? mtlab::Figure::fig1 : mtlab::Figure::fig2;
        const auto paths = mtlab::reproduce_figure(figure, preset, rep_out);
        for (const auto& path : paths) std::cout << path.string() << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const mtlab::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
}
