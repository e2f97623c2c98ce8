#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "curvepred/curves_db.hpp"
#include "curvepred/explorer.hpp"
#include "curvepred/trainers.hpp"

using namespace curvepred;

namespace {

std::vector<HyperParamAxis> two_axes() {
    HyperParamAxis a{"lr", AxisKind::Real, {0.1, 0.2}};
    HyperParamAxis b{"batch", AxisKind::Integer,
                     {std::int64_t{1}, std::int64_t{2}, std::int64_t{3}}};
    return {a, b};
}

std::vector<HyperParamAxis> one_axis(std::size_t n) {
    HyperParamAxis a{"lr", AxisKind::Real, {}};
    for (std::size_t i = 0; i < n; ++i)
        a.values.emplace_back(0.1 * static_cast<double>(i + 1));
    return {a};
}

SvrModel trained_surface_model(const SyntheticSurface& trainer,
                               const std::vector<HyperParamAxis>& axes,
                               std::size_t k, std::uint64_t seed) {
    auto settings = sample_settings(axes, 1.0, seed);
    settings.resize(std::min<std::size_t>(44, settings.size()));
    const auto db = build_database(axes, settings, trainer, 30, seed);
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (const auto& rec : db.records) {
        X.push_back(extract_features(rec.curve, k));
        y.push_back(*rec.curve.final_accuracy);
    }
    return train_svr(X, y, KernelSpec::gaussian(1.0 / static_cast<double>(k)),
                     {10.0, 0.01});
}

} // namespace

TEST_CASE("initial state is uniform per axis") {
    ExplorerConfig cfg;
    {
        const auto state = init_state(one_axis(4), cfg);
        CHECK(state.probabilities[0] == std::vector<double>(4, 0.25));
        CHECK(!state.last_reward.has_value());
        CHECK(state.history.empty());
    }
    {
        const auto axes = two_axes();
        const auto state = init_state(axes, cfg);
        CHECK(state.probabilities[0] == std::vector<double>(2, 0.5));
        CHECK(state.probabilities[1] ==
              std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
    }
    {
        const auto state = init_state(one_axis(1), cfg);
        CHECK(state.probabilities[0] == std::vector<double>{1.0});
        CHECK(converged(one_axis(1), state, cfg).has_value() == (cfg.threshold < 1.0));
    }
}

TEST_CASE("sampling follows the probability vectors") {
    ExplorerConfig cfg;
    cfg.p_floor = 0.0; // disabled for the deterministic case
    const auto axes = one_axis(3);
    auto state = init_state(axes, cfg);
    state.probabilities[0] = {1.0, 0.0, 0.0};
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto s = sample_setting(axes, state, rng);
        CHECK(setting_indices(axes, s)[0] == 0);
    }
}

TEST_CASE("empirical frequencies match a uniform vector") {
    ExplorerConfig cfg;
    const auto axes = one_axis(4);
    const auto state = init_state(axes, cfg);
    std::mt19937_64 rng(77);
    std::vector<std::size_t> counts(4, 0);
    const std::size_t draws = 100000;
    for (std::size_t i = 0; i < draws; ++i)
        ++counts[setting_indices(axes, sample_setting(axes, state, rng))[0]];
    for (std::size_t c : counts)
        CHECK(std::abs(static_cast<double>(c) / draws - 0.25) < 0.02);
}

TEST_CASE("axes are sampled independently") {
    ExplorerConfig cfg;
    const auto axes = two_axes();
    auto state = init_state(axes, cfg);
    state.probabilities[0] = {0.7, 0.3};
    state.probabilities[1] = {0.2, 0.5, 0.3};
    std::mt19937_64 rng(13);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> joint;
    const std::size_t draws = 200000;
    for (std::size_t i = 0; i < draws; ++i) {
        const auto idx = setting_indices(axes, sample_setting(axes, state, rng));
        ++joint[{idx[0], idx[1]}];
    }
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const double expected = state.probabilities[0][i] * state.probabilities[1][j];
            const double observed = static_cast<double>(joint[{i, j}]) / draws;
            CHECK(std::abs(observed - expected) < 0.01);
        }
}

TEST_CASE("probability update matches the stated rule") {
    ExplorerConfig cfg;
    cfg.delta = 0.06;
    cfg.radius = 1;
    cfg.p_floor = 0.01;
    const auto axes = one_axis(4);
    const Setting chosen{{axes[0].values[1]}};

    SUBCASE("reward increase boosts the neighbourhood") {
        auto state = init_state(axes, cfg);
        update_probabilities(state, axes, cfg, chosen, 0.3); // baseline
        CHECK(state.probabilities[0] == std::vector<double>(4, 0.25));
        update_probabilities(state, axes, cfg, chosen, 0.5);
        CHECK(state.probabilities[0][0] == doctest::Approx(0.27));
        CHECK(state.probabilities[0][1] == doctest::Approx(0.27));
        CHECK(state.probabilities[0][2] == doctest::Approx(0.27));
        CHECK(state.probabilities[0][3] == doctest::Approx(0.19));
    }
    SUBCASE("equal reward leaves probabilities unchanged") {
        auto state = init_state(axes, cfg);
        update_probabilities(state, axes, cfg, chosen, 0.3);
        update_probabilities(state, axes, cfg, chosen, 0.3);
        CHECK(state.probabilities[0] == std::vector<double>(4, 0.25));
    }
    SUBCASE("reward decrease penalises the neighbourhood") {
        auto state = init_state(axes, cfg);
        update_probabilities(state, axes, cfg, chosen, 0.3);
        update_probabilities(state, axes, cfg, chosen, 0.1);
        CHECK(state.probabilities[0][0] == doctest::Approx(0.23));
        CHECK(state.probabilities[0][1] == doctest::Approx(0.23));
        CHECK(state.probabilities[0][2] == doctest::Approx(0.23));
        CHECK(state.probabilities[0][3] == doctest::Approx(0.31));
    }
    SUBCASE("reward outside [0,1] is rejected") {
        auto state = init_state(axes, cfg);
        CHECK_THROWS(update_probabilities(state, axes, cfg, chosen, 1.5));
    }
}

TEST_CASE("updates preserve distribution invariants") {
    ExplorerConfig cfg;
    const auto axes = default_axes();
    auto state = init_state(axes, cfg);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> reward_d(0.0, 1.0);
    for (int t = 0; t < 300; ++t) {
        const auto s = sample_setting(axes, state, rng);
        update_probabilities(state, axes, cfg, s, reward_d(rng));
        for (const auto& p : state.probabilities) {
            const double sum = std::accumulate(p.begin(), p.end(), 0.0);
            CHECK(std::abs(sum - 1.0) < 1e-9);
            for (double v : p) {
                CHECK(v >= cfg.p_floor - 1e-12);
                CHECK(v <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("monotone stimulus: the chosen index moves with the reward") {
    ExplorerConfig cfg;
    cfg.p_floor = 0.0;
    const auto axes = one_axis(6);
    for (double second_reward : {0.9, 0.1}) {
        auto state = init_state(axes, cfg);
        const Setting chosen{{axes[0].values[3]}};
        update_probabilities(state, axes, cfg, chosen, 0.5);
        const double before = state.probabilities[0][3];
        update_probabilities(state, axes, cfg, chosen, second_reward);
        const double after = state.probabilities[0][3];
        if (second_reward > 0.5)
            CHECK(after >= before);
        else
            CHECK(after <= before);
    }
}

TEST_CASE("convergence requires every axis to clear its threshold") {
    ExplorerConfig cfg;
    cfg.threshold = 0.8;
    const auto axes = two_axes();
    auto state = init_state(axes, cfg);

    state.probabilities[0] = {0.9, 0.1};
    state.probabilities[1] = {0.05, 0.90, 0.05};
    const auto s = converged(axes, state, cfg);
    REQUIRE(s.has_value());
    CHECK(setting_indices(axes, *s) == std::vector<std::size_t>{0, 1});

    state.probabilities[1] = {0.5, 0.5, 0.0};
    CHECK(!converged(axes, state, cfg).has_value());

    state.probabilities[0] = {0.5, 0.5};
    CHECK(!converged(axes, state, cfg).has_value());
}

TEST_CASE("degenerate budgets") {
    const auto axes = default_axes();
    SyntheticSurface::Options opts;
    opts.noise_sigma = 0.01;
    const SyntheticSurface trainer(axes, opts);
    const auto model = trained_surface_model(trainer, axes, 3, 5);

    ExplorerConfig cfg;
    cfg.max_iterations = 1;
    std::mt19937_64 rng(5);
    const auto result = explore(axes, cfg, trainer, model, rng);
    CHECK(result.history.size() == 1);
    CHECK(result.top.size() == 1);
    CHECK(result.best_setting == result.history[0].setting);

    // top_n >= history: every distinct explored setting is retrained
    ExplorerConfig cfg2;
    cfg2.max_iterations = 12;
    cfg2.top_n = 1000;
    std::mt19937_64 rng2(6);
    const auto result2 = explore(axes, cfg2, trainer, model, rng2);
    std::set<std::vector<std::size_t>> distinct;
    for (const auto& h : result2.history)
        distinct.insert(setting_indices(axes, h.setting));
    CHECK(result2.top.size() == distinct.size());
}

TEST_CASE("exploration is deterministic per seed and finds a good plateau") {
    const auto axes = default_axes();
    SyntheticSurface::Options opts;
    opts.noise_sigma = 0.01;
    const SyntheticSurface trainer(axes, opts);
    const auto model = trained_surface_model(trainer, axes, 3, 5);

    ExplorerConfig cfg;
    std::mt19937_64 rng_a(9), rng_b(9);
    const auto ra = explore(axes, cfg, trainer, model, rng_a);
    const auto rb = explore(axes, cfg, trainer, model, rng_b);
    CHECK(ra.best_setting == rb.best_setting);
    CHECK(ra.history.size() == rb.history.size());

    const double best_plateau = trainer.plateau(trainer.optimum());
    CHECK(trainer.plateau(ra.best_setting) > best_plateau - 0.05);
}
