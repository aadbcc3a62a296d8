#include "mtlab/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "mtlab/clusters.hpp"
#include "mtlab/errors.hpp"
#include "mtlab/procedures.hpp"
#include "mtlab/process.hpp"
#include "mtlab/svg.hpp"

namespace mtlab {

namespace {

using nlohmann::json;

constexpr std::uint64_t SIM_DOMAIN = 1;
constexpr std::uint64_t CALIB_DOMAIN = 2;

const char* model_name(ModelKind kind) {
    return kind == ModelKind::model1 ? "model1" : "model2";
}

std::uint64_t df_bits(double df) { return std::bit_cast<std::uint64_t>(df); }

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : "nan";
}

void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("unknown key \"" + key + "\" in " + where);
        }
    }
}

double parse_df_entry(const json& entry) {
    if (entry.is_string()) {
        if (entry.get<std::string>() == "inf") {
            return std::numeric_limits<double>::infinity();
        }
        throw ConfigError("df entries must be positive numbers or \"inf\"");
    }
    if (!entry.is_number()) {
        throw ConfigError("df entries must be positive numbers or \"inf\"");
    }
    const double df = entry.get<double>();
    if (!(df > 0.0)) throw ConfigError("df entries must be positive");
    return df;
}

/// Weight-support diameter used as the run-cluster gap (at least 1).
std::size_t cluster_gap(const WeightProfile& weights) {
    const int span = weights.span();
    return span >= 1 ? static_cast<std::size_t>(span) : 1;
}

struct CellTally {
    std::size_t n_pos = 0;
    std::size_t n_multi = 0;
    unsigned long long sum_n = 0;
    unsigned long long sum_n2 = 0;
    unsigned long long exceedances = 0;
    unsigned long long clusters = 0;

    void merge(const CellTally& other) {
        n_pos += other.n_pos;
        n_multi += other.n_multi;
        sum_n += other.sum_n;
        sum_n2 += other.sum_n2;
        exceedances += other.exceedances;
        clusters += other.clusters;
    }
};

struct CellContext {
    ModelKind model;
    std::size_t nu;
    std::size_t r;
    double df;
    std::size_t n;
    WeightProfile weights;
    ErrorModel error;
    double threshold;
    std::size_t gap;
    RandomStream sim_base;
};

std::vector<double> cell_series(const CellContext& cell, const RandomStream& rep_stream) {
    if (cell.model == ModelKind::model1) {
        return generate_ma(cell.weights, cell.error, cell.nu, rep_stream);
    }
    const std::vector<double> mu(cell.nu, 0.0);
    const GroupData data =
        generate_groups(cell.weights, cell.error, cell.nu, cell.n, mu, rep_stream);
    return group_t_stats(data);
}

CellTally simulate_replicates(const CellContext& cell, std::size_t repetitions,
                              unsigned threads) {
    const unsigned workers = std::max(1u, threads);
    std::vector<CellTally> tallies(workers);
    std::vector<std::exception_ptr> errors(workers);

    auto run_worker = [&](unsigned w) {
        CellTally& tally = tallies[w];
        for (std::size_t i = w; i < repetitions; i += workers) {
            const std::vector<double> series =
                cell_series(cell, cell.sim_base.child(static_cast<std::uint64_t>(i)));
            const std::size_t n_exc = count_exceedances(series, cell.threshold);
            tally.sum_n += n_exc;
            tally.sum_n2 += static_cast<unsigned long long>(n_exc) * n_exc;
            if (n_exc > 0) {
                ++tally.n_pos;
                if (n_exc > 1) ++tally.n_multi;
                const std::vector<std::size_t> indices =
                    exceedance_indices(series, cell.threshold);
                tally.exceedances += n_exc;
                tally.clusters += run_clusters(indices, cell.gap).size();
            }
        }
    };

    if (workers == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> pool;
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

    CellTally total;
    for (const auto& tally : tallies) total.merge(tally);
    return total;
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config is not valid JSON: ") + err.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    require_keys(j,
                 {"model", "n", "nu", "r", "weights", "df", "alpha", "repetitions",
                  "calibration", "master_seed", "threads"},
                 "config");

    ExperimentSpec spec;
    try {
        if (j.contains("model")) {
            const std::string m = j.at("model").get<std::string>();
            if (m == "model1") {
                spec.model = ModelKind::model1;
            } else if (m == "model2") {
                spec.model = ModelKind::model2;
            } else {
                throw ConfigError("model must be \"model1\" or \"model2\"");
            }
        }
        if (j.contains("n")) spec.n = j.at("n").get<std::size_t>();
        if (j.contains("nu")) spec.nu = j.at("nu").get<std::vector<std::size_t>>();
        if (j.contains("r")) spec.r = j.at("r").get<std::vector<std::size_t>>();
        if (j.contains("weights")) {
            spec.weights = j.at("weights").get<std::vector<double>>();
        }
        if (j.contains("df")) {
            spec.df.clear();
            for (const auto& entry : j.at("df")) spec.df.push_back(parse_df_entry(entry));
        }
        if (j.contains("alpha")) spec.alpha = j.at("alpha").get<double>();
        if (j.contains("repetitions")) {
            spec.repetitions = j.at("repetitions").get<std::size_t>();
        }
        if (j.contains("calibration")) {
            const json& cal = j.at("calibration");
            if (!cal.is_object()) throw ConfigError("calibration must be an object");
            require_keys(cal, {"method", "budget"}, "calibration");
            if (cal.contains("method")) {
                const std::string method = cal.at("method").get<std::string>();
                if (method == "auto") {
                    spec.calibration = CalibrationChoice::automatic;
                } else if (method == "analytic") {
                    spec.calibration = CalibrationChoice::analytic;
                } else if (method == "monte_carlo") {
                    spec.calibration = CalibrationChoice::monte_carlo;
                } else {
                    throw ConfigError(
                        "calibration.method must be \"auto\", \"analytic\" or \"monte_carlo\"");
                }
            }
            if (cal.contains("budget")) {
                spec.calibration_budget = cal.at("budget").get<std::uint64_t>();
            }
        }
        if (j.contains("master_seed")) {
            spec.master_seed = j.at("master_seed").get<std::uint64_t>();
        }
        if (j.contains("threads")) spec.threads = j.at("threads").get<unsigned>();
    } catch (const json::exception& err) {
        throw ConfigError(std::string("config field has the wrong type: ") + err.what());
    }

    if (spec.nu.empty() && j.contains("nu")) {
        // an explicitly empty grid is allowed; nothing to check
    }
    for (std::size_t nu : spec.nu) {
        if (nu == 0) throw ConfigError("nu values must be >= 1");
    }
    for (std::size_t r : spec.r) {
        if (r == 0) throw ConfigError("r values must be >= 1");
    }
    if (!spec.weights.empty()) {
        if (spec.r.empty()) {
            spec.r = {spec.weights.size()};
        } else {
            for (std::size_t r : spec.r) {
                if (r != spec.weights.size()) {
                    throw ConfigError(
                        "explicit weights fix r to the list length; remove the r grid or "
                        "set it to that single value");
                }
            }
        }
    }
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
    if (spec.repetitions == 0) throw ConfigError("repetitions must be >= 1");
    if (spec.model == ModelKind::model2 && spec.n < 2) {
        throw ConfigError("model2 requires group size n >= 2");
    }
    if (spec.calibration_budget == 0) throw ConfigError("calibration budget must be >= 1");
    if (spec.threads == 0) throw ConfigError("threads must be >= 1");
    return spec;
}

std::string experiment_spec_json(const ExperimentSpec& spec) {
    json j;
    j["model"] = model_name(spec.model);
    if (spec.model == ModelKind::model2) j["n"] = spec.n;
    j["nu"] = spec.nu;
    j["r"] = spec.r;
    if (!spec.weights.empty()) j["weights"] = spec.weights;
    json dfs = json::array();
    for (double df : spec.df) {
        if (std::isinf(df)) {
            dfs.push_back("inf");
        } else {
            dfs.push_back(df);
        }
    }
    j["df"] = dfs;
    j["alpha"] = spec.alpha;
    j["repetitions"] = spec.repetitions;
    const char* method = spec.calibration == CalibrationChoice::automatic      ? "auto"
                         : spec.calibration == CalibrationChoice::analytic     ? "analytic"
                                                                               : "monte_carlo";
    j["calibration"] = {{"method", method}, {"budget", spec.calibration_budget}};
    j["master_seed"] = spec.master_seed;
    j["threads"] = spec.threads;
    return j.dump(2);
}

GridResult run_grid(const ExperimentSpec& spec) {
    GridResult result;
    const double beta = beta_from_alpha(spec.alpha);
    (void)beta;
    const std::uint64_t model_id = spec.model == ModelKind::model1 ? 1 : 2;
    const RandomStream root{spec.master_seed, 0};

    // threshold cache keyed by (r, df, nu); the model is fixed for the whole grid
    std::map<std::tuple<std::size_t, std::uint64_t, std::size_t>, ThresholdLadder> cache;

    for (std::size_t nu : spec.nu) {
        for (std::size_t r : spec.r) {
            for (double df : spec.df) {
                const auto started = std::chrono::steady_clock::now();
                const ErrorModel error =
                    std::isinf(df) ? ErrorModel(Gaussian{1.0}) : ErrorModel(StudentT{df, 1.0});
                WeightProfile weights = spec.weights.empty()
                                            ? WeightProfile::equal(r)
                                            : WeightProfile::from_values(spec.weights);
                try {
                    weights = unit_variance_scale(weights, error);
                } catch (const InfiniteVarianceError& err) {
                    result.failures.push_back(
                        {model_name(spec.model), nu, r, df, err.what()});
                    continue;
                }

                ThresholdLadder ladder;
                const auto cache_key = std::make_tuple(r, df_bits(df), nu);
                const auto hit = cache.find(cache_key);
                if (hit != cache.end()) {
                    ladder = hit->second;
                } else {
                    ErrorModel marginal;
                    const bool have_analytic =
                        spec.model == ModelKind::model1
                            ? analytic_ma_marginal(weights, error, marginal)
                            : analytic_t_marginal(error, spec.n, marginal);
                    const bool want_mc =
                        spec.calibration == CalibrationChoice::monte_carlo ||
                        (spec.calibration == CalibrationChoice::automatic && !have_analytic);
                    try {
                        if (!want_mc && !have_analytic) {
                            throw ConfigError(
                                "analytic calibration unavailable for this cell");
                        }
                        if (want_mc) {
                            const StatSampler sampler =
                                spec.model == ModelKind::model1
                                    ? model1_stat_sampler(weights, error)
                                    : model2_stat_sampler(weights, error, spec.n);
                            const RandomStream calib_stream = root.child(CALIB_DOMAIN)
                                                                  .child(model_id)
                                                                  .child(nu)
                                                                  .child(r)
                                                                  .child(df_bits(df));
                            ladder = threshold_ladder(sampler, spec.alpha, nu, 1,
                                                      spec.calibration_budget, calib_stream,
                                                      spec.threads);
                        } else {
                            ladder = threshold_ladder(marginal, spec.alpha, nu, 1);
                        }
                    } catch (const std::exception& err) {
                        result.failures.push_back(
                            {model_name(spec.model), nu, r, df, err.what()});
                        continue;
                    }
                    cache.emplace(cache_key, ladder);
                }

                CellContext cell{spec.model,
                                 nu,
                                 r,
                                 df,
                                 spec.n,
                                 weights,
                                 error,
                                 ladder.thresholds.front(),
                                 cluster_gap(weights),
                                 root.child(SIM_DOMAIN).child(model_id).child(nu).child(r)};

                CellTally tally;
                try {
                    tally = simulate_replicates(cell, spec.repetitions, spec.threads);
                } catch (const std::exception& err) {
                    result.failures.push_back(
                        {model_name(spec.model), nu, r, df, err.what()});
                    continue;
                }

                ResultRow row;
                row.model = model_name(spec.model);
                row.nu = nu;
                row.r = r;
                row.df = df;
                row.threshold = ladder.thresholds.front();
                row.threshold_se = ladder.se.front();
                row.repetitions = spec.repetitions;
                row.n_pos = tally.n_pos;
                row.n_multi = tally.n_multi;
                if (tally.n_pos > 0) {
                    row.clustering_proportion = static_cast<double>(tally.n_multi) /
                                                static_cast<double>(tally.n_pos);
                }
                row.fwer = static_cast<double>(tally.n_pos) /
                           static_cast<double>(spec.repetitions);
                const double reps = static_cast<double>(spec.repetitions);
                const double mean = static_cast<double>(tally.sum_n) / reps;
                if (mean > 0.0 && spec.repetitions >= 2) {
                    const double sum_n = static_cast<double>(tally.sum_n);
                    const double sum_n2 = static_cast<double>(tally.sum_n2);
                    const double var = (sum_n2 - sum_n * sum_n / reps) / (reps - 1.0);
                    row.dispersion_index = var / mean;
                }
                if (tally.clusters > 0) {
                    row.mean_cluster_size = static_cast<double>(tally.exceedances) /
                                            static_cast<double>(tally.clusters);
                }
                row.wall_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - started)
                                  .count();
                result.rows.push_back(std::move(row));
            }
        }
    }

    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const ResultRow& a, const ResultRow& b) {
                         return std::tie(a.model, a.nu, a.r, a.df) <
                                std::tie(b.model, b.nu, b.r, b.df);
                     });
    return result;
}

std::string grid_csv(const GridResult& result) {
    std::ostringstream out;
    out << "model,nu,r,df,threshold,threshold_se,repetitions,n_pos,n_multi,"
           "clustering_proportion,fwer,dispersion_index,mean_cluster_size\n";
    for (const ResultRow& row : result.rows) {
        out << row.model << ',' << row.nu << ',' << row.r << ',' << format_double(row.df)
            << ',' << format_double(row.threshold) << ',' << format_double(row.threshold_se)
            << ',' << row.repetitions << ',' << row.n_pos << ',' << row.n_multi << ','
            << format_optional(row.clustering_proportion) << ',' << format_double(row.fwer)
            << ',' << format_optional(row.dispersion_index) << ','
            << format_optional(row.mean_cluster_size) << '\n';
    }
    return out.str();
}

std::string grid_metadata_json(const ExperimentSpec& spec, const GridResult& result) {
    json meta;
    meta["config"] = json::parse(experiment_spec_json(spec));
    meta["row_count"] = result.rows.size();
    json rows = json::array();
    double total_ms = 0.0;
    for (const ResultRow& row : result.rows) {
        rows.push_back({{"model", row.model},
                        {"nu", row.nu},
                        {"r", row.r},
                        {"df", std::isinf(row.df) ? json("inf") : json(row.df)},
                        {"wall_ms", row.wall_ms}});
        total_ms += row.wall_ms;
    }
    meta["cell_wall_times"] = rows;
    meta["total_wall_ms"] = total_ms;
    json failures = json::array();
    for (const FailedCell& f : result.failures) {
        failures.push_back({{"model", f.model},
                            {"nu", f.nu},
                            {"r", f.r},
                            {"df", std::isinf(f.df) ? json("inf") : json(f.df)},
                            {"reason", f.reason}});
    }
    meta["failed_cells"] = failures;
    meta["notes"] = {
        {"df_grid", "default df grid {3,4,6,10,20,inf} is a configurable choice"},
        {"wall_times", "timings live here so the CSV stays byte-stable across runs"}};
    return meta.dump(2);
}

FigurePreset figure_preset(Preset preset) {
    FigurePreset fp;
    fp.r = {1, 3, 10, 50};
    fp.df = {3.0, 4.0, 6.0, 10.0, 20.0, std::numeric_limits<double>::infinity()};
    fp.alpha = 0.05;
    fp.master_seed = 1;
    fp.threads = 1;
    if (preset == Preset::full) {
        fp.nu = {500, 1000, 2000, 5000, 10000};
        fp.repetitions = 10000;
        fp.calibration_budget = 200000000;
    } else {
        fp.nu = {500, 2000, 10000};
        fp.repetitions = 2000;
        fp.calibration_budget = 20000000;
    }
    return fp;
}

std::vector<std::filesystem::path> reproduce_figure(Figure figure, const FigurePreset& preset,
                                                    const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " +
                                 ec.message());
    }

    ExperimentSpec spec;
    spec.model = figure == Figure::fig1 ? ModelKind::model1 : ModelKind::model2;
    spec.n = 10;
    spec.nu = preset.nu;
    spec.r = preset.r;
    spec.df = preset.df;
    spec.alpha = preset.alpha;
    spec.repetitions = preset.repetitions;
    spec.calibration = CalibrationChoice::automatic;
    spec.calibration_budget = preset.calibration_budget;
    spec.master_seed = preset.master_seed;
    spec.threads = preset.threads;

    const GridResult grid = run_grid(spec);
    const std::string fig_name = figure == Figure::fig1 ? "fig1" : "fig2";

    // x position for the infinite-df point on the log axis
    double max_finite_df = 0.0;
    for (double df : spec.df) {
        if (!std::isinf(df)) max_finite_df = std::max(max_finite_df, df);
    }
    const double inf_position = max_finite_df > 0.0 ? max_finite_df * 3.0 : 1.0;
    auto df_position = [&](double df) { return std::isinf(df) ? inf_position : df; };

    std::vector<std::size_t> panels = spec.r;
    std::sort(panels.begin(), panels.end());
    std::vector<fs::path> written;

    for (std::size_t pi = 0; pi < panels.size(); ++pi) {
        const std::size_t r = panels[pi];
        GridResult panel;
        for (const ResultRow& row : grid.rows) {
            if (row.r == r) panel.rows.push_back(row);
        }

        const std::string stem =
            fig_name + "_panel_" + std::string(1, static_cast<char>('a' + pi)) + "_r" +
            std::to_string(r);

        const fs::path csv_path = out_dir / (stem + ".csv");
        {
            std::ofstream out(csv_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + csv_path.string());
            out << grid_csv(panel);
        }
        written.push_back(csv_path);

        ChartSpec chart;
        chart.title = (figure == Figure::fig1 ? std::string("Model 1") : "Model 2") +
                      ", r = " + std::to_string(r);
        chart.x_label = "degrees of freedom (log scale)";
        chart.y_label = "clustering proportion";
        chart.log_x = true;
        for (double df : spec.df) {
            chart.x_ticks.emplace_back(df_position(df),
                                       std::isinf(df) ? "inf" : format_double(df));
        }
        for (std::size_t nu : spec.nu) {
            ChartSeries series;
            series.label = "nu = " + std::to_string(nu);
            for (const ResultRow& row : panel.rows) {
                if (row.nu == nu && row.clustering_proportion) {
                    series.points.emplace_back(df_position(row.df),
                                               *row.clustering_proportion);
                }
            }
            chart.series.push_back(std::move(series));
        }

        const fs::path svg_path = out_dir / (stem + ".svg");
        {
            std::ofstream out(svg_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + svg_path.string());
            out << render_chart_svg(chart);
        }
        written.push_back(svg_path);
    }

    const fs::path meta_path = out_dir / (fig_name + "_metadata.json");
    {
        std::ofstream out(meta_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + meta_path.string());
        out << grid_metadata_json(spec, grid);
    }
    written.push_back(meta_path);
    return written;
}

std::vector<std::filesystem::path> reproduce_figure(Figure figure, Preset preset,
                                                    const std::filesystem::path& out_dir) {
    return reproduce_figure(figure, figure_preset(preset), out_dir);
}

}  // namespace mtlab
