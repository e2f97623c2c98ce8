#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "curvepred/trainers.hpp"

using namespace curvepred;

namespace {

Setting setting_at(const std::vector<HyperParamAxis>& axes,
                   const std::vector<std::size_t>& idx) {
    Setting s;
    for (std::size_t i = 0; i < axes.size(); ++i)
        s.values.push_back(axes[i].values[idx[i]]);
    return s;
}

} // namespace

TEST_CASE("synthetic curves follow the saturating exponential") {
    const auto axes = default_axes();
    SyntheticSurface::Options opts;
    opts.noise_sigma = 0.0;
    const SyntheticSurface trainer(axes, opts);
    const auto s = trainer.optimum();

    const auto curve = trainer.train(s, 5, 1);
    const double a_inf = trainer.plateau(s);
    const double kappa = trainer.rate(s);
    for (int e = 1; e <= 5; ++e)
        CHECK(curve.epoch_accuracies[e - 1] ==
              doctest::Approx(a_inf * (1.0 - std::exp(-kappa * e))));

    // deterministic under noise
    SyntheticSurface::Options noisy;
    noisy.noise_sigma = 0.01;
    const SyntheticSurface trainer2(axes, noisy);
    const auto c1 = trainer2.train(s, 10, 33);
    const auto c2 = trainer2.train(s, 10, 33);
    CHECK(c1.epoch_accuracies == c2.epoch_accuracies);
    const auto c3 = trainer2.train(s, 10, 34);
    CHECK(c1.epoch_accuracies != c3.epoch_accuracies);
}

TEST_CASE("synthetic surface argmax matches exhaustive full training") {
    const auto axes = default_axes();
    SyntheticSurface::Options opts;
    opts.noise_sigma = 0.001;
    const SyntheticSurface trainer(axes, opts);

    double best_acc = -1.0;
    Setting best;
    std::size_t i = 0;
    for (std::size_t a = 0; a < axes[0].size(); ++a)
        for (std::size_t b = 0; b < axes[1].size(); ++b)
            for (std::size_t c = 0; c < axes[2].size(); ++c) {
                const auto s = setting_at(axes, {a, b, c});
                const auto curve = trainer.train(s, 30, 100 + i++);
                if (*curve.final_accuracy > best_acc) {
                    best_acc = *curve.final_accuracy;
                    best = s;
                }
            }
    CHECK(best == trainer.optimum());
}

TEST_CASE("optimizer fixed points and exact steps") {
    std::vector<double> params{1.0, -2.0};
    std::vector<double> zero{0.0, 0.0};

    auto p = params;
    sgd_step(p, zero, 0.1);
    CHECK(p == params);

    std::vector<double> vel{0.0, 0.0};
    p = params;
    momentum_step(p, zero, vel, 0.1);
    CHECK(p == params);

    AdamState adam;
    p = params;
    adam_step(p, zero, adam, 0.1);
    CHECK(p == params);

    std::vector<double> grad{0.5, -1.0};
    p = params;
    sgd_step(p, grad, 0.1);
    CHECK(p[0] == doctest::Approx(1.0 - 0.05));
    CHECK(p[1] == doctest::Approx(-2.0 + 0.1));
}

TEST_CASE("sgd on a quadratic decays geometrically") {
    // f(w) = w^2/2, gradient w; 100 steps at lr 0.1 from w = 1
    std::vector<double> w{1.0};
    for (int i = 0; i < 100; ++i) {
        std::vector<double> g{w[0]};
        sgd_step(w, g, 0.1);
    }
    CHECK(w[0] == doctest::Approx(std::pow(0.9, 100)).epsilon(1e-12));
}

TEST_CASE("classifier gradients match central finite differences") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const auto data = make_blobs(3, 2, 6, 0.5, 100 + trial);
        auto model = MlpModel::init(2, trial % 2 ? 4 : 0, 3, 200 + trial);
        std::vector<std::size_t> batch(data.rows());
        std::iota(batch.begin(), batch.end(), 0);

        std::vector<double> grads;
        model.loss_and_grad(data, batch, &grads);

        std::uniform_int_distribution<std::size_t> pick(0, model.n_params() - 1);
        const double h = 1e-5;
        for (int probe = 0; probe < 8; ++probe) {
            const std::size_t j = pick(rng);
            const double saved = model.params[j];
            model.params[j] = saved + h;
            const double lp = model.loss_and_grad(data, batch, nullptr);
            model.params[j] = saved - h;
            const double lm = model.loss_and_grad(data, batch, nullptr);
            model.params[j] = saved;
            const double fd = (lp - lm) / (2.0 * h);
            const double scale = std::max({std::abs(fd), std::abs(grads[j]), 1e-8});
            CHECK(std::abs(fd - grads[j]) / scale < 1e-4);
        }
    }
}

TEST_CASE("zero learning rate keeps the model at chance") {
    HyperParamAxis lr{"lr", AxisKind::Real, {0.0, 0.01}};
    HyperParamAxis batch{"batch", AxisKind::Integer, {std::int64_t{32}}};
    HyperParamAxis opt{"optimizer", AxisKind::Categorical,
                       {std::string("sgd"), std::string("momentum"), std::string("adam")}};
    BlobClassifierTrainer::Options opts;
    opts.axes = {lr, batch, opt};
    opts.patience = 0;
    const BlobClassifierTrainer trainer(opts);

    const Setting s{{0.0, std::int64_t{32}, std::string("sgd")}};
    const auto curve = trainer.train(s, 5, 1);
    for (std::size_t e = 1; e < curve.epoch_accuracies.size(); ++e)
        CHECK(curve.epoch_accuracies[e] == curve.epoch_accuracies[0]);
}

TEST_CASE("adam separates well-separated blobs") {
    BlobClassifierTrainer::Options opts;
    opts.spread = 0.25;
    const BlobClassifierTrainer trainer(opts);
    const auto axes = trainer.axes();
    const Setting s{{axes[0].values[5], std::int64_t{16}, std::string("adam")}};
    // lr index 5 is ~1e-2 on the default log-spaced axis
    const auto curve = trainer.train(s, 30, 3);
    CHECK(*curve.final_accuracy > 0.95);
}

TEST_CASE("first-epoch divergence yields a chance-level curve") {
    HyperParamAxis lr{"lr", AxisKind::Real, {1e200}};
    HyperParamAxis batch{"batch", AxisKind::Integer, {std::int64_t{16}}};
    HyperParamAxis opt{"optimizer", AxisKind::Categorical, {std::string("sgd")}};
    BlobClassifierTrainer::Options opts;
    opts.axes = {lr, batch, opt};
    opts.patience = 0;
    const BlobClassifierTrainer trainer(opts);

    const Setting s{{1e200, std::int64_t{16}, std::string("sgd")}};
    const auto curve = trainer.train(s, 6, 2);
    REQUIRE(curve.epoch_accuracies.size() == 6);
    for (double a : curve.epoch_accuracies)
        CHECK(a == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("classifier training is deterministic per seed") {
    BlobClassifierTrainer::Options opts;
    const BlobClassifierTrainer trainer(opts);
    const auto axes = trainer.axes();
    const Setting s{{axes[0].values[4], std::int64_t{32}, std::string("momentum")}};
    const auto c1 = trainer.train(s, 10, 9);
    const auto c2 = trainer.train(s, 10, 9);
    CHECK(c1.epoch_accuracies == c2.epoch_accuracies);
}
