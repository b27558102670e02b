#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "grwc/experiment.hpp"

namespace {

int run_compare(const std::string& rwc_path, const std::string& grwc_path,
                const std::string& out_path) {
    const auto rwc_runs = grwc::read_summary_csv(rwc_path);
    const auto grwc_runs = grwc::read_summary_csv(grwc_path);
    const std::string report = grwc::compare_report(rwc_runs, grwc_runs);
    if (out_path.empty()) {
        std::cout << report;
    } else {
        grwc::write_file_atomic(out_path, report);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-weight-change trainer and rwc/grwc comparison harness"};
    app.require_subcommand(0, 1);

    std::string config_path, algo, mnist_images, mnist_labels, synthetic, out_dir;
    std::vector<std::uint64_t> seeds;
    double lambda = 0.0, target = 0.0;
    std::size_t pop = 0, limit = 0;
    std::uint64_t gen_epochs = 0, max_iter = 0, stride = 0, dataset_seed = 0;
    unsigned threads = 0;
    bool bias = false, balanced = false;
    std::vector<std::size_t> topology;
    std::string holdout_images, holdout_labels, holdout_synthetic;
    std::size_t holdout_limit = 0;

    app.add_option("--config", config_path, "JSON config file; flags override its values");
    app.add_option("--algo", algo, "algorithm: rwc or grwc");
    app.add_option("--seed", seeds, "run seed, repeatable");
    app.add_option("--lambda", lambda, "perturbation bound");
    app.add_option("--pop", pop, "population size (grwc)");
    app.add_option("--gen-epochs", gen_epochs, "epochs per generation (grwc)");
    app.add_option("--target", target, "target error");
    app.add_option("--max-iter", max_iter, "per-candidate iteration budget");
    app.add_option("--topology", topology, "layer sizes: input hidden output")->expected(3);
    app.add_flag("--bias", bias, "append a constant-1 input to each layer");
    app.add_option("--mnist-images", mnist_images, "IDX image file");
    app.add_option("--mnist-labels", mnist_labels, "IDX label file");
    app.add_option("--limit", limit, "number of samples to load");
    app.add_flag("--balanced", balanced, "take the first limit/10 samples of each class");
    app.add_option("--synthetic", synthetic, "synthetic dataset: xor or gaussian_blobs");
    app.add_option("--dataset-seed", dataset_seed, "synthetic dataset generator seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--stride", stride, "curve recording stride");
    app.add_option("--threads", threads, "worker threads");
    app.add_option("--holdout-images", holdout_images, "held-out IDX image file");
    app.add_option("--holdout-labels", holdout_labels, "held-out IDX label file");
    app.add_option("--holdout-synthetic", holdout_synthetic, "held-out synthetic dataset");
    app.add_option("--holdout-limit", holdout_limit, "held-out sample count");

    auto* compare = app.add_subcommand("compare", "compare two summary CSVs side by side");
    std::string cmp_rwc, cmp_grwc, cmp_out;
    compare->add_option("--rwc", cmp_rwc, "rwc summary CSV")->required();
    compare->add_option("--grwc", cmp_grwc, "grwc summary CSV")->required();
    compare->add_option("--out", cmp_out, "write the report here instead of stdout");

    if (argc == 1) {
        std::cout << app.help();
        return 2;
    }
    CLI11_PARSE(app, argc, argv);

    try {
        if (compare->parsed()) {
            return run_compare(cmp_rwc, cmp_grwc, cmp_out);
        }

        grwc::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = grwc::load_config_file(config_path);
        if (app.count("--algo")) cfg.algorithm = algo;
        if (app.count("--seed")) cfg.seeds = seeds;
        if (app.count("--lambda")) cfg.lambda = lambda;
        if (app.count("--pop")) cfg.population_size = pop;
        if (app.count("--gen-epochs")) cfg.epochs_per_generation = gen_epochs;
        if (app.count("--target")) cfg.target_error = target;
        if (app.count("--max-iter")) cfg.max_iterations = max_iter;
        if (app.count("--topology")) {
            cfg.topology.input_size = topology[0];
            cfg.topology.hidden_size = topology[1];
            cfg.topology.output_size = topology[2];
        }
        if (app.count("--bias")) cfg.topology.with_bias = bias;
        if (app.count("--mnist-images")) cfg.dataset.mnist_images = mnist_images;
        if (app.count("--mnist-labels")) cfg.dataset.mnist_labels = mnist_labels;
        if (app.count("--limit")) cfg.dataset.limit = limit;
        if (app.count("--balanced")) cfg.dataset.balanced = balanced;
        if (app.count("--synthetic")) cfg.dataset.synthetic = synthetic;
        if (app.count("--dataset-seed")) cfg.dataset.seed = dataset_seed;
        if (app.count("--out")) cfg.output_dir = out_dir;
        if (app.count("--stride")) cfg.record_stride = stride;
        if (app.count("--threads")) cfg.threads = threads;
        if (app.count("--holdout-images")) cfg.holdout.mnist_images = holdout_images;
        if (app.count("--holdout-labels")) cfg.holdout.mnist_labels = holdout_labels;
        if (app.count("--holdout-synthetic")) cfg.holdout.synthetic = holdout_synthetic;
        if (app.count("--holdout-limit")) cfg.holdout.limit = holdout_limit;
        if (cfg.seeds.empty()) cfg.seeds = {1};

        const auto summaries = grwc::run_experiment(cfg);
        for (const auto& s : summaries) {
            std::printf("seed=%llu final_error=%s %s wall=%.2fs\n",
                        static_cast<unsigned long long>(s.seed),
                        grwc::format_double(s.final_error).c_str(),
                        s.converged
                            ? ("converged_at=" + std::to_string(s.iterations_to_target)).c_str()
                            : "exhausted",
                        s.wall_time_seconds);
        }
        std::printf("wrote %s/summary_%s.csv\n", cfg.output_dir.c_str(), cfg.algorithm.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
