#ifndef MTLAB_EXPERIMENT_HPP
#define MTLAB_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mtlab/calibration.hpp"

namespace mtlab {

enum class ModelKind { model1, model2 };

enum class CalibrationChoice { automatic, analytic, monte_carlo };

/// Grid description mirrored one-for-one by the JSON config format.
struct ExperimentSpec {
    ModelKind model = ModelKind::model1;
    std::size_t n = 10;  // group size, model 2 only
    std::vector<std::size_t> nu;
    std::vector<std::size_t> r;
    std::vector<double> weights;  // optional explicit theta values at offsets 0..len-1;
                                  // empty means equal weights over 0..r-1
    std::vector<double> df;       // infinity encodes Gaussian errors
    double alpha = 0.05;
    std::size_t repetitions = 10000;
    CalibrationChoice calibration = CalibrationChoice::automatic;
    std::uint64_t calibration_budget = 20000000;
    std::uint64_t master_seed = 1;
    unsigned threads = 1;
};

/// Parse / serialize the JSON config. Unknown keys raise ConfigError.
ExperimentSpec parse_experiment_spec(const std::string& json_text);
std::string experiment_spec_json(const ExperimentSpec& spec);

struct ResultRow {
    std::string model;
    std::size_t nu = 0;
    std::size_t r = 0;
    double df = 0.0;
    double threshold = 0.0;
    double threshold_se = 0.0;
    std::size_t repetitions = 0;
    std::size_t n_pos = 0;    // replicates with N > 0
    std::size_t n_multi = 0;  // replicates with N > 1
    std::optional<double> clustering_proportion;
    double fwer = 0.0;
    std::optional<double> dispersion_index;
    std::optional<double> mean_cluster_size;
    double wall_ms = 0.0;  // reported in metadata, never in the CSV
};

struct FailedCell {
    std::string model;
    std::size_t nu = 0;
    std::size_t r = 0;
    double df = 0.0;
    std::string reason;
};

struct GridResult {
    std::vector<ResultRow> rows;
    std::vector<FailedCell> failures;
};

/// Runs the full grid: per (model, nu, r, df) cell, unit-variance weights,
/// FWER calibration of t1 at alpha, `repetitions` replicates. Deterministic
/// for a fixed master_seed regardless of spec.threads.
GridResult run_grid(const ExperimentSpec& spec);

/// CSV with a fixed header; identical bytes for identical grids and seeds.
std::string grid_csv(const GridResult& result);

/// Companion metadata (wall times, failures, config echo) as a JSON document.
std::string grid_metadata_json(const ExperimentSpec& spec, const GridResult& result);

enum class Figure { fig1, fig2 };
enum class Preset { full, reduced };

struct FigurePreset {
    std::vector<std::size_t> nu;
    std::vector<std::size_t> r;
    std::vector<double> df;
    std::size_t repetitions = 0;
    std::uint64_t calibration_budget = 0;
    double alpha = 0.05;
    std::uint64_t master_seed = 1;
    unsigned threads = 1;
};

/// Grid dimensions for the named preset (full: the production-scale design;
/// reduced: a CI-sized subset).
FigurePreset figure_preset(Preset preset);

/// Runs the figure grid and writes one CSV and one SVG per panel (panels
/// (a)-(d) are the r values) plus a metadata JSON. Returns written paths.
std::vector<std::filesystem::path> reproduce_figure(Figure figure, const FigurePreset& preset,
                                                    const std::filesystem::path& out_dir);
std::vector<std::filesystem::path> reproduce_figure(Figure figure, Preset preset,
                                                    const std::filesystem::path& out_dir);

}  // namespace mtlab

#endif
