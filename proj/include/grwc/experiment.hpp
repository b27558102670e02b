#ifndef GRWC_EXPERIMENT_HPP
#define GRWC_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "grwc/curve.hpp"
#include "grwc/data_io.hpp"
#include "grwc/grwc.hpp"
#include "grwc/net.hpp"
#include "grwc/rwc.hpp"

namespace grwc {

// Where the training data comes from: either a synthetic generator or a
// pair of MNIST IDX files.
struct DatasetSpec {
    std::string synthetic;      // "xor" | "gaussian_blobs"; empty means MNIST files
    std::uint64_t seed = 2025;  // synthetic generator seed
    std::string mnist_images;
    std::string mnist_labels;
    std::size_t limit = 100;
    bool balanced = false;
};

struct ExperimentConfig {
    std::string algorithm; // "rwc" | "grwc"
    NetworkTopology topology;
    double lambda = 0.05;
    std::size_t population_size = 8;          // grwc only
    std::uint64_t epochs_per_generation = 1000; // grwc only
    double target_error = 0.01;
    std::uint64_t max_iterations = 500000; // per-candidate budget
    std::vector<std::uint64_t> seeds;
    DatasetSpec dataset;
    std::uint64_t record_stride = 100;
    std::string output_dir = "out";
    unsigned threads = 1;
    DatasetSpec holdout; // optional held-out evaluation; unused when empty

    bool has_holdout() const;
    // throws std::invalid_argument naming the offending field
    void validate() const;
};

struct RunSummary {
    std::uint64_t seed = 0;
    std::string algorithm;
    double final_error = 0.0; // lowest dataset cost observed during the run
    bool converged = false;
    std::uint64_t iterations_to_target = 0;        // valid when converged
    std::uint64_t total_candidate_iterations = 0;  // work metric: per-candidate steps x N
    double wall_time_seconds = 0.0;                // not persisted to CSV
};

// Parses the JSON config document; field names match ExperimentConfig.
// Unknown keys are rejected so typos fail loudly.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

Dataset load_dataset(const DatasetSpec& spec);

// One run per seed. Writes curve_<algo>_seed<seed>.csv per run, an
// avg_curve_<algo>.csv across seeds, and summary_<algo>.csv with a final
// "average" row. Returns the per-run summaries in seed order.
std::vector<RunSummary> run_experiment(const ExperimentConfig& config);

// Side-by-side comparison: success counts, average final error, average
// work, average iterations-to-target over converged runs.
std::string compare_report(const std::vector<RunSummary>& rwc_runs,
                           const std::vector<RunSummary>& grwc_runs);

// --- CSV helpers (17 significant digits, so replay equality is exact) ---

std::string format_double(double v);

std::string curve_csv(const ErrorCurve& curve);
void write_curve_csv(const std::string& path, const ErrorCurve& curve);

// Step-function average across runs: at each recorded iteration the mean of
// every curve's most recent value, each run's final value carried forward.
ErrorCurve average_curve(const std::vector<ErrorCurve>& curves);

// The average row's iterations column counts exhausted runs at the full
// budget, which is why max_iterations is a parameter.
std::string summary_csv(const std::vector<RunSummary>& summaries, std::uint64_t max_iterations);
void write_summary_csv(const std::string& path, const std::vector<RunSummary>& summaries,
                       std::uint64_t max_iterations);

// Reads the per-run rows back (the average row is skipped).
std::vector<RunSummary> read_summary_csv(const std::string& path);

// Write-to-temp-then-rename, so partially written files are never visible.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace grwc

#endif
