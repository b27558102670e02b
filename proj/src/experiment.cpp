#include "grwc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace grwc {

bool ExperimentConfig::has_holdout() const {
    return !holdout.synthetic.empty() || !holdout.mnist_images.empty();
}

namespace {

void validate_dataset_spec(const DatasetSpec& spec, const std::string& field) {
    const bool synthetic = !spec.synthetic.empty();
    const bool mnist = !spec.mnist_images.empty() || !spec.mnist_labels.empty();
    if (synthetic && mnist) {
        throw std::invalid_argument("config: " + field +
                                    " must be either synthetic or mnist, not both");
    }
    if (!synthetic && !mnist) {
        throw std::invalid_argument("config: " + field + " source is missing");
    }
    if (synthetic && spec.synthetic != "xor" && spec.synthetic != "gaussian_blobs") {
        throw std::invalid_argument("config: " + field + ".synthetic must be xor or gaussian_blobs");
    }
    if (mnist && (spec.mnist_images.empty() || spec.mnist_labels.empty())) {
        throw std::invalid_argument("config: " + field +
                                    " needs both mnist_images and mnist_labels");
    }
    if (mnist && spec.limit == 0) {
        throw std::invalid_argument("config: " + field + ".limit must be >= 1");
    }
}

} // namespace

void ExperimentConfig::validate() const {
    if (algorithm != "rwc" && algorithm != "grwc") {
        throw std::invalid_argument("config: algorithm must be rwc or grwc");
    }
    topology.validate();
    if (seeds.empty()) throw std::invalid_argument("config: seeds must be non-empty");
    if (output_dir.empty()) throw std::invalid_argument("config: output_dir must be set");
    validate_dataset_spec(dataset, "dataset");
    if (has_holdout()) validate_dataset_spec(holdout, "holdout");
    if (algorithm == "grwc") {
        GrwcConfig g;
        g.population_size = population_size;
        g.epochs_per_generation = epochs_per_generation;
        g.lambda = lambda;
        g.target_error = target_error;
        g.max_candidate_iterations = max_iterations;
        g.record_stride = record_stride;
        g.threads = threads;
        g.validate();
    } else {
        RwcConfig r;
        r.lambda = lambda;
        r.max_iterations = max_iterations;
        r.target_error = target_error;
        r.record_stride = record_stride;
        r.validate();
        if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    }
}

namespace {

DatasetSpec dataset_spec_from_json(const json& j, const std::string& field) {
    static const std::set<std::string> known = {"synthetic", "seed",   "mnist_images",
                                                "mnist_labels", "limit", "balanced"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) {
            throw std::invalid_argument("config: unknown field " + field + "." + key);
        }
    }
    DatasetSpec spec;
    if (j.contains("synthetic")) spec.synthetic = j.at("synthetic").get<std::string>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mnist_images")) spec.mnist_images = j.at("mnist_images").get<std::string>();
    if (j.contains("mnist_labels")) spec.mnist_labels = j.at("mnist_labels").get<std::string>();
    if (j.contains("limit")) spec.limit = j.at("limit").get<std::size_t>();
    if (j.contains("balanced")) spec.balanced = j.at("balanced").get<bool>();
    return spec;
}

} // namespace

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    static const std::set<std::string> known = {
        "algorithm",    "topology",     "with_bias",   "lambda",    "population_size",
        "epochs_per_generation", "target_error", "max_iterations", "seeds",
        "dataset",      "record_stride", "output_dir", "threads",   "holdout"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) throw std::invalid_argument("config: unknown field " + key);
    }
    ExperimentConfig cfg;
    try {
        if (j.contains("algorithm")) cfg.algorithm = j.at("algorithm").get<std::string>();
        if (j.contains("topology")) {
            const auto sizes = j.at("topology").get<std::vector<std::size_t>>();
            if (sizes.size() != 3) {
                throw std::invalid_argument("config: topology must hold three layer sizes");
            }
            cfg.topology.input_size = sizes[0];
            cfg.topology.hidden_size = sizes[1];
            cfg.topology.output_size = sizes[2];
        }
        if (j.contains("with_bias")) cfg.topology.with_bias = j.at("with_bias").get<bool>();
        if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
        if (j.contains("population_size")) cfg.population_size = j.at("population_size").get<std::size_t>();
        if (j.contains("epochs_per_generation")) {
            cfg.epochs_per_generation = j.at("epochs_per_generation").get<std::uint64_t>();
        }
        if (j.contains("target_error")) cfg.target_error = j.at("target_error").get<double>();
        if (j.contains("max_iterations")) cfg.max_iterations = j.at("max_iterations").get<std::uint64_t>();
        if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        if (j.contains("dataset")) cfg.dataset = dataset_spec_from_json(j.at("dataset"), "dataset");
        if (j.contains("record_stride")) cfg.record_stride = j.at("record_stride").get<std::uint64_t>();
        if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();
        if (j.contains("holdout")) cfg.holdout = dataset_spec_from_json(j.at("holdout"), "holdout");
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return config_from_json(buffer.str());
}

Dataset load_dataset(const DatasetSpec& spec) {
    if (!spec.synthetic.empty()) return make_synthetic(spec.synthetic, spec.seed);
    return load_mnist(spec.mnist_images, spec.mnist_labels, spec.limit, spec.balanced);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string curve_csv(const ErrorCurve& curve) {
    std::string out = "iteration,cost\n";
    for (const CurvePoint& p : curve.points()) {
        out += std::to_string(p.iteration);
        out += ',';
        out += format_double(p.cost);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw std::runtime_error("short write to " + tmp);
    }
    fs::rename(tmp, path);
}

void write_curve_csv(const std::string& path, const ErrorCurve& curve) {
    write_file_atomic(path, curve_csv(curve));
}

ErrorCurve average_curve(const std::vector<ErrorCurve>& curves) {
    if (curves.empty()) throw std::invalid_argument("average_curve: no curves");
    std::vector<std::uint64_t> grid;
    for (const ErrorCurve& c : curves) {
        if (c.empty()) throw std::invalid_argument("average_curve: empty curve");
        for (const CurvePoint& p : c.points()) grid.push_back(p.iteration);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<std::size_t> cursor(curves.size(), 0);
    ErrorCurve avg;
    for (std::uint64_t t : grid) {
        double sum = 0.0;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            const auto& pts = curves[i].points();
            while (cursor[i] + 1 < pts.size() && pts[cursor[i] + 1].iteration <= t) ++cursor[i];
            sum += pts[cursor[i]].cost;
        }
        avg.append(t, sum / static_cast<double>(curves.size()));
    }
    return avg;
}

std::string summary_csv(const std::vector<RunSummary>& summaries, std::uint64_t max_iterations) {
    std::string out = "seed,algorithm,final_error,iterations_to_target,total_candidate_iterations\n";
    double error_sum = 0.0;
    double iter_sum = 0.0;
    double total_sum = 0.0;
    for (const RunSummary& s : summaries) {
        out += std::to_string(s.seed);
        out += ',';
        out += s.algorithm;
        out += ',';
        out += format_double(s.final_error);
        out += ',';
        out += s.converged ? std::to_string(s.iterations_to_target) : std::string("exhausted");
        out += ',';
        out += std::to_string(s.total_candidate_iterations);
        out += '\n';
        error_sum += s.final_error;
        iter_sum += static_cast<double>(s.converged ? s.iterations_to_target : max_iterations);
        total_sum += static_cast<double>(s.total_candidate_iterations);
    }
    if (!summaries.empty()) {
        const double n = static_cast<double>(summaries.size());
        out += "average,";
        out += summaries.front().algorithm;
        out += ',';
        out += format_double(error_sum / n);
        out += ',';
        out += format_double(iter_sum / n);
        out += ',';
        out += format_double(total_sum / n);
        out += '\n';
    }
    return out;
}

void write_summary_csv(const std::string& path, const std::vector<RunSummary>& summaries,
                       std::uint64_t max_iterations) {
    write_file_atomic(path, summary_csv(summaries, max_iterations));
}

std::vector<RunSummary> read_summary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open summary file " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty summary file");
    std::vector<RunSummary> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string seed, algorithm, error, iterations, total;
        if (!std::getline(row, seed, ',') || !std::getline(row, algorithm, ',') ||
            !std::getline(row, error, ',') || !std::getline(row, iterations, ',') ||
            !std::getline(row, total, ',')) {
            throw std::runtime_error(path + ": malformed summary row: " + line);
        }
        if (seed == "average") continue;
        RunSummary s;
        s.seed = std::stoull(seed);
        s.algorithm = algorithm;
        s.final_error = std::stod(error);
        if (iterations == "exhausted") {
            s.converged = false;
        } else {
            s.converged = true;
            s.iterations_to_target = std::stoull(iterations);
        }
        s.total_candidate_iterations = std::stoull(total);
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

struct RunOutput {
    RunSummary summary;
    ErrorCurve curve;
    WeightSet final_weights;
};

RunOutput run_one(const ExperimentConfig& config, const Dataset& data, std::uint64_t seed,
                  unsigned inner_threads) {
    const auto start = std::chrono::steady_clock::now();
    RunOutput out;
    out.summary.seed = seed;
    out.summary.algorithm = config.algorithm;
    if (config.algorithm == "rwc") {
        RwcConfig cfg;
        cfg.lambda = config.lambda;
        cfg.max_iterations = config.max_iterations;
        cfg.target_error = config.target_error;
        cfg.record_stride = config.record_stride;
        RwcResult r = rwc_train(config.topology, data, cfg, seed);
        out.summary.final_error = r.best_cost;
        out.summary.converged = r.converged;
        out.summary.iterations_to_target = r.converged ? r.state.iteration : 0;
        out.summary.total_candidate_iterations = r.state.iteration;
        out.curve = std::move(r.curve);
        out.final_weights = std::move(r.state.weights);
    } else {
        GrwcConfig cfg;
        cfg.population_size = config.population_size;
        cfg.epochs_per_generation = config.epochs_per_generation;
        cfg.lambda = config.lambda;
        cfg.target_error = config.target_error;
        cfg.max_candidate_iterations = config.max_iterations;
        cfg.record_stride = config.record_stride;
        cfg.threads = inner_threads;
        GrwcResult r = grwc_train(config.topology, data, cfg, seed);
        out.summary.final_error = r.best_cost;
        out.summary.converged = r.outcome == GrwcOutcome::converged;
        out.summary.iterations_to_target = out.summary.converged ? r.iterations_to_target : 0;
        out.summary.total_candidate_iterations =
            r.per_candidate_iterations * config.population_size;
        out.curve = std::move(r.curve);
        std::size_t best = 0;
        for (std::size_t i = 1; i < r.population.candidates.size(); ++i) {
            if (r.population.candidates[i].state.last_cost <
                r.population.candidates[best].state.last_cost) {
                best = i;
            }
        }
        out.final_weights = std::move(r.population.candidates[best].state.weights);
    }
    out.summary.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::string curve_path(const ExperimentConfig& config, std::uint64_t seed) {
    return config.output_dir + "/curve_" + config.algorithm + "_seed" + std::to_string(seed) +
           ".csv";
}

} // namespace

std::vector<RunSummary> run_experiment(const ExperimentConfig& config) {
    config.validate();
    const Dataset data = load_dataset(config.dataset);
    validate_dataset(config.topology, data);
    fs::create_directories(config.output_dir);

    const std::size_t n = config.seeds.size();
    std::vector<RunOutput> outputs(n);
    std::vector<std::exception_ptr> failures(n);

    auto work = [&](std::size_t i, unsigned inner_threads) {
        try {
            outputs[i] = run_one(config, data, config.seeds[i], inner_threads);
            write_curve_csv(curve_path(config, config.seeds[i]), outputs[i].curve);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    };

    // rwc runs are single-threaded, so seeds fan out; grwc threads fan out
    // inside each run instead, keeping the core count bounded either way.
    if (config.algorithm == "rwc" && config.threads > 1 && n > 1) {
        const unsigned workers = static_cast<unsigned>(
            std::min<std::size_t>(config.threads, n));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += workers) work(i, 1);
            });
        }
        for (std::thread& t : pool) t.join();
    } else {
        for (std::size_t i = 0; i < n; ++i) work(i, config.threads);
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (failures[i]) std::rethrow_exception(failures[i]);
    }

    std::vector<RunSummary> summaries;
    std::vector<ErrorCurve> curves;
    summaries.reserve(n);
    curves.reserve(n);
    for (RunOutput& o : outputs) {
        summaries.push_back(o.summary);
        curves.push_back(o.curve);
    }
    write_curve_csv(config.output_dir + "/avg_curve_" + config.algorithm + ".csv",
                    average_curve(curves));
    write_summary_csv(config.output_dir + "/summary_" + config.algorithm + ".csv", summaries,
                      config.max_iterations);

    if (config.has_holdout()) {
        const Dataset held_out = load_dataset(config.holdout);
        validate_dataset(config.topology, held_out);
        for (std::size_t i = 0; i < n; ++i) {
            const double c = dataset_cost(config.topology, outputs[i].final_weights, held_out);
            const double acc =
                classification_accuracy(config.topology, outputs[i].final_weights, held_out);
            std::printf("holdout seed=%llu cost=%s accuracy=%s\n",
                        static_cast<unsigned long long>(config.seeds[i]),
                        format_double(c).c_str(), format_double(acc).c_str());
        }
    }
    return summaries;
}

namespace {

double mean_of(const std::vector<RunSummary>& runs, double (*pick)(const RunSummary&)) {
    double sum = 0.0;
    for (const RunSummary& r : runs) sum += pick(r);
    return sum / static_cast<double>(runs.size());
}

std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

std::string compare_report(const std::vector<RunSummary>& rwc_runs,
                           const std::vector<RunSummary>& grwc_runs) {
    if (rwc_runs.empty() || grwc_runs.empty()) {
        throw std::invalid_argument("compare_report: both summary lists must be non-empty");
    }
    struct Column {
        std::size_t runs;
        std::size_t successes;
        double avg_error;
        double avg_work;
        bool any_converged;
        double avg_iterations; // converged runs only
    };
    auto summarize = [](const std::vector<RunSummary>& runs) {
        Column c{};
        c.runs = runs.size();
        for (const RunSummary& r : runs) {
            if (r.converged) ++c.successes;
        }
        c.avg_error = mean_of(runs, [](const RunSummary& r) { return r.final_error; });
        c.avg_work = mean_of(runs, [](const RunSummary& r) {
            return static_cast<double>(r.total_candidate_iterations);
        });
        c.any_converged = c.successes > 0;
        if (c.any_converged) {
            double sum = 0.0;
            for (const RunSummary& r : runs) {
                if (r.converged) sum += static_cast<double>(r.iterations_to_target);
            }
            c.avg_iterations = sum / static_cast<double>(c.successes);
        }
        return c;
    };
    const Column a = summarize(rwc_runs);
    const Column b = summarize(grwc_runs);

    std::string out;
    out += "comparison (work = candidate-iterations; error = lowest dataset cost per run; "
           "avg curves = mean across seeds at each recorded iteration with final values "
           "carried forward)\n";
    out += "metric,rwc,grwc\n";
    out += "runs," + std::to_string(a.runs) + ',' + std::to_string(b.runs) + '\n';
    out += "reached_target," + std::to_string(a.successes) + ',' + std::to_string(b.successes) + '\n';
    out += "avg_final_error," + fmt6(a.avg_error) + ',' + fmt6(b.avg_error) + '\n';
    out += "avg_total_work," + fmt6(a.avg_work) + ',' + fmt6(b.avg_work) + '\n';
    out += "avg_iterations_to_target_converged,";
    out += (a.any_converged ? fmt6(a.avg_iterations) : std::string("n/a")) + ',' +
           (b.any_converged ? fmt6(b.avg_iterations) : std::string("n/a")) + '\n';
    return out;
}

} // namespace grwc
