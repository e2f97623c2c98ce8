#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>

#include "curvepred/config.hpp"
#include "curvepred/curves_db.hpp"
#include "curvepred/explorer.hpp"
#include "curvepred/power_fit.hpp"
#include "curvepred/predictor.hpp"
#include "curvepred/svg.hpp"
#include "curvepred/svr.hpp"
#include "curvepred/trainers.hpp"
#include "text_io.hpp"

namespace fs = std::filesystem;
using namespace curvepred;

namespace {

RunConfig load_or_default(const std::string& config_path) {
    return config_path.empty() ? default_config() : load_config(config_path);
}

std::unique_ptr<Trainer> make_trainer(const RunConfig& cfg) {
    if (cfg.trainer_kind == "synthetic") {
        SyntheticSurface::Options opts;
        opts.noise_sigma = cfg.noise_sigma;
        opts.patience = cfg.patience;
        return std::make_unique<SyntheticSurface>(cfg.axes, opts);
    }
    BlobClassifierTrainer::Options opts;
    opts.n_classes = cfg.n_classes;
    opts.dim = cfg.dim;
    opts.samples_per_class = cfg.samples_per_class;
    opts.spread = cfg.spread;
    opts.hidden_units = cfg.hidden_units;
    opts.dataset_seed = cfg.dataset_seed;
    opts.patience = cfg.classifier_patience;
    opts.axes = cfg.axes;
    return std::make_unique<BlobClassifierTrainer>(opts);
}

void features_of(const Database& db, std::size_t k,
                 std::vector<std::vector<double>>& X, std::vector<double>& y) {
    X.clear();
    y.clear();
    for (const auto& rec : db.records) {
        X.push_back(extract_features(rec.curve, k));
        y.push_back(rec.curve.final_accuracy.value());
    }
}

KernelSpec kernel_for(const RunConfig& cfg, KernelKind kind) {
    switch (kind) {
        case KernelKind::Linear: return KernelSpec::linear();
        case KernelKind::Polynomial: return KernelSpec::polynomial(cfg.degree, cfg.coef0);
        case KernelKind::Gaussian: return KernelSpec::gaussian(cfg.effective_gamma());
    }
    throw std::logic_error("unreachable");
}

int cmd_build_db(const std::string& config_path, std::uint64_t seed,
                 const std::string& out_dir) {
    const RunConfig cfg = load_or_default(config_path);
    const auto trainer = make_trainer(cfg);
    const auto grid_size = enumerate_grid(cfg.axes).size();

    std::vector<Setting> settings;
    if (cfg.n_records) {
        if (*cfg.n_records == 0 || *cfg.n_records > grid_size)
            throw std::runtime_error("n_records outside (0, grid size]");
        settings = sample_settings(cfg.axes, 1.0, seed);
        settings.resize(*cfg.n_records);
    } else {
        settings = sample_settings(cfg.axes, cfg.fraction, seed);
    }

    const Database db = build_database(
        cfg.axes, settings, *trainer, cfg.fin_epoch, seed,
        [](const Setting&, const std::string& err) {
            std::cerr << "training failed, record skipped: " << err << '\n';
        });

    fs::create_directories(out_dir);
    const std::string path = (fs::path(out_dir) / "db.csv").string();
    save_csv(db, path);
    std::cout << "grid size: " << grid_size << "\nsample fraction: "
              << (cfg.n_records ? static_cast<double>(*cfg.n_records) /
                                      static_cast<double>(grid_size)
                                : cfg.fraction)
              << "\nrecords written: " << db.records.size() << "\ndatabase: " << path
              << '\n';
    return 0;
}

int cmd_train_svr(const std::string& config_path, const std::string& db_path,
                  std::uint64_t seed, const std::string& out_dir) {
    const RunConfig cfg = load_or_default(config_path);
    const Database db = load_csv(db_path, cfg.axes);
    if (cfg.n_train >= db.records.size())
        throw std::runtime_error("n_train leaves an empty test split");
    const auto [train_db, test_db] = split(db, cfg.n_train, seed);

    std::vector<std::vector<double>> X_train, X_test;
    std::vector<double> y_train, y_test;
    features_of(train_db, cfg.k, X_train, y_train);
    features_of(test_db, cfg.k, X_test, y_test);

    fs::create_directories(out_dir);
    std::ofstream table((fs::path(out_dir) / "kernels_mse.csv").string());
    table << "kernel,test_mse\n";

    SvrModel best;
    double best_mse = 0.0;
    bool have_best = false;
    for (const KernelKind kind :
         {KernelKind::Linear, KernelKind::Polynomial, KernelKind::Gaussian}) {
        const KernelSpec spec = kernel_for(cfg, kind);
        const SvrModel model = train_svr(X_train, y_train, spec, cfg.svr_hyper, cfg.tol);
        const double m = mse(model, X_test, y_test);
        table << kernel_name(spec) << ',' << m << '\n';
        std::cout << kernel_name(spec) << " test MSE: " << m << '\n';

        const auto report = evaluate_predictor(model, test_db, cfg.k);
        save_evaluation_csv(
            report,
            (fs::path(out_dir) / ("evaluation_" + kernel_name(spec) + ".csv")).string());

        if (!have_best || m < best_mse) {
            best = model;
            best_mse = m;
            have_best = true;
        }
    }
    const std::string model_path = (fs::path(out_dir) / "svr_model.txt").string();
    save_model(best, model_path);
    std::cout << "selected kernel: " << kernel_name(best.kernel)
              << "\nmodel: " << model_path << '\n';
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& prefix_csv,
                int fin_epoch) {
    const SvrModel model = load_model(model_path);
    std::vector<double> prefix;
    for (const auto& piece : curvepred::text::split(prefix_csv, ','))
        prefix.push_back(curvepred::text::parse_double(
            std::string(curvepred::text::trim(piece))));
    const auto outcome = predict_final_accuracy(model, prefix, fin_epoch);
    std::cout << "prediction: " << outcome.value << "\nsource: "
              << (outcome.source == PredictionSource::Svr ? "svr" : "curve_fit")
              << "\nsvr_raw: " << outcome.svr_raw << '\n';
    if (outcome.fit)
        std::cout << "fit alpha: " << outcome.fit->alpha
                  << "\nfit beta: " << outcome.fit->beta << '\n';
    return 0;
}

int cmd_evaluate(const std::string& config_path, const std::string& model_path,
                 const std::string& db_path, const std::string& out_dir) {
    const RunConfig cfg = load_or_default(config_path);
    const SvrModel model = load_model(model_path);
    const Database db = load_csv(db_path, cfg.axes);
    const auto report = evaluate_predictor(model, db, cfg.k);
    fs::create_directories(out_dir);
    const std::string path = (fs::path(out_dir) / "evaluation.csv").string();
    save_evaluation_csv(report, path);
    std::cout << "records: " << report.rows.size() << "\nmse: " << report.mse
              << "\nfallback rate: " << report.fallback_rate << "\nreport: " << path
              << '\n';
    return 0;
}

int cmd_explore(const std::string& config_path, const std::string& model_path,
                std::uint64_t seed, const std::string& out_dir,
                std::int64_t max_iterations_override) {
    RunConfig cfg = load_or_default(config_path);
    if (max_iterations_override > 0)
        cfg.explorer.max_iterations = static_cast<std::size_t>(max_iterations_override);
    const SvrModel model = load_model(model_path);
    const auto trainer = make_trainer(cfg);
    std::mt19937_64 rng(seed);
    const ExplorationResult result =
        explore(cfg.axes, cfg.explorer, *trainer, model, rng,
                [](const std::string& msg) { std::cerr << msg << '\n'; });

    fs::create_directories(out_dir);
    save_history_csv(cfg.axes, result.history,
                     (fs::path(out_dir) / "history.csv").string());
    save_top_csv(cfg.axes, result.top, (fs::path(out_dir) / "report.csv").string());

    std::cout << "iterations: " << result.history.size() << "\nbest setting:";
    for (std::size_t i = 0; i < cfg.axes.size(); ++i)
        std::cout << ' ' << cfg.axes[i].name << '='
                  << axis_value_to_string(result.best_setting.values[i]);
    std::cout << "\nbest full-training accuracy: " << result.best_accuracy << '\n';
    return 0;
}

int cmd_plot(const std::string& input, const std::string& output) {
    plot_csv(input, output);
    std::cout << "chart: " << output << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"early learning-curve accuracy prediction and hyper-parameter exploration"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", db_path, model_path, prefix_csv;
    std::string plot_input, plot_output;
    std::uint64_t seed = 42;
    int fin_epoch = 30;
    std::int64_t max_iterations = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file");
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--out", out_dir, "output directory");
    };

    auto* build = app.add_subcommand("build-db", "train the grid sample and store curves");
    add_common(build);

    auto* train = app.add_subcommand("train-svr", "train and compare the three kernels");
    add_common(train);
    train->add_option("--db", db_path, "database CSV")->required();

    auto* predict_cmd = app.add_subcommand("predict", "predict one curve's final accuracy");
    predict_cmd->add_option("--model", model_path, "SVR model file")->required();
    predict_cmd->add_option("--prefix", prefix_csv, "comma-separated prefix accuracies")
        ->required();
    predict_cmd->add_option("--fin-epoch", fin_epoch, "epoch budget");

    auto* evaluate = app.add_subcommand("evaluate", "evaluate the predictor on a database");
    add_common(evaluate);
    evaluate->add_option("--model", model_path, "SVR model file")->required();
    evaluate->add_option("--db", db_path, "database CSV")->required();

    auto* explore_cmd = app.add_subcommand("explore", "probabilistic hyper-parameter search");
    add_common(explore_cmd);
    explore_cmd->add_option("--model", model_path, "SVR model file")->required();
    explore_cmd->add_option("--max-iterations", max_iterations, "iteration budget override");

    auto* plot = app.add_subcommand("plot", "render an evaluation or history CSV as SVG");
    plot->add_option("--input", plot_input, "CSV file")->required();
    plot->add_option("--output", plot_output, "SVG file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed())
            return cmd_build_db(config_path, seed, out_dir);
        if (train->parsed())
            return cmd_train_svr(config_path, db_path, seed, out_dir);
        if (predict_cmd->parsed())
            return cmd_predict(model_path, prefix_csv, fin_epoch);
        if (evaluate->parsed())
            return cmd_evaluate(config_path, model_path, db_path, out_dir);
        if (explore_cmd->parsed())
            return cmd_explore(config_path, model_path, seed, out_dir, max_iterations);
        if (plot->parsed())
            return cmd_plot(plot_input, plot_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
