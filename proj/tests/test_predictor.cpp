#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "curvepred/curves_db.hpp"
#include "curvepred/predictor.hpp"
#include "curvepred/trainers.hpp"

using namespace curvepred;

namespace {

SvrModel constant_model(double value, std::size_t dim) {
    SvrModel m;
    m.bias = value;
    m.dim = dim;
    m.kernel = KernelSpec::gaussian(1.0);
    return m;
}

} // namespace

TEST_CASE("extract_features returns the epoch-ordered prefix") {
    LearningCurve curve{{0.2, 0.5, 0.6, 0.65}, 0.7, 10};
    CHECK(extract_features(curve, 3) == std::vector<double>{0.2, 0.5, 0.6});
    CHECK(extract_features(curve, 1) == std::vector<double>{0.2});
    CHECK(extract_features(curve, 4) == curve.epoch_accuracies);
    CHECK_THROWS(extract_features(curve, 5));
    CHECK_THROWS(extract_features(curve, 0));
}

TEST_CASE("gate truth table") {
    const std::vector<double> prefix{0.2, 0.25, 0.30};

    SUBCASE("svr value inside the gate is accepted") {
        const auto out = predict_final_accuracy(constant_model(0.85, 3), prefix, 30);
        CHECK(out.source == PredictionSource::Svr);
        CHECK(out.value == doctest::Approx(0.85));
        CHECK(out.svr_raw == doctest::Approx(0.85));
        CHECK(!out.fit.has_value());
    }
    SUBCASE("svr value above 1 falls back to the curve fit") {
        const auto out = predict_final_accuracy(constant_model(1.20, 3), prefix, 30);
        CHECK(out.source == PredictionSource::CurveFit);
        CHECK(out.fit.has_value());
        CHECK(out.value >= 0.30);
        CHECK(out.value <= 1.0);
    }
    SUBCASE("svr value below the prefix maximum falls back") {
        const auto out = predict_final_accuracy(constant_model(0.25, 3), prefix, 30);
        CHECK(out.source == PredictionSource::CurveFit);
    }
    SUBCASE("boundary: exactly the prefix maximum falls back") {
        const auto out = predict_final_accuracy(constant_model(0.30, 3), prefix, 30);
        CHECK(out.source == PredictionSource::CurveFit);
    }
    SUBCASE("boundary: exactly 1 is accepted") {
        const auto out = predict_final_accuracy(constant_model(1.0, 3), prefix, 30);
        CHECK(out.source == PredictionSource::Svr);
        CHECK(out.value == doctest::Approx(1.0));
    }
}

TEST_CASE("gate totality on random raw values") {
    const std::vector<double> prefix{0.1, 0.4, 0.35};
    for (double raw : {-5.0, 0.0, 0.39999, 0.4, 0.400001, 0.99, 1.0, 1.0001, 7.0}) {
        const auto out = predict_final_accuracy(constant_model(raw, 3), prefix, 30);
        const bool svr_branch = out.source == PredictionSource::Svr;
        CHECK(svr_branch == (raw > 0.4 && raw <= 1.0));
        CHECK(out.value > 0.0);
        CHECK(out.value <= 1.0);
        if (!svr_branch)
            CHECK(out.value >= 0.4);
    }
}

TEST_CASE("degenerate all-zero prefix surfaces the fit error") {
    const std::vector<double> prefix{0.0, 0.0, 0.0};
    CHECK_THROWS(predict_final_accuracy(constant_model(2.0, 3), prefix, 30));
}

TEST_CASE("input validation") {
    CHECK_THROWS(predict_final_accuracy(constant_model(0.5, 1), {{0.3}}, 30));
    const std::vector<double> bad{0.3, 1.2};
    CHECK_THROWS(predict_final_accuracy(constant_model(0.5, 2), bad, 30));
    // model trained with a different k
    const std::vector<double> prefix{0.2, 0.3, 0.4};
    SvrModel m = constant_model(0.9, 4);
    m.support_vectors = {{0.1, 0.1, 0.1, 0.1}};
    m.dual_coeffs = {0.5};
    CHECK_THROWS(predict_final_accuracy(m, prefix, 30));
}

TEST_CASE("evaluation report basics") {
    const auto axes = default_axes();
    const auto grid = enumerate_grid(axes);
    Database db{axes, {}, 0};
    LearningCurve curve{{0.2, 0.25, 0.3}, 0.85, 30};
    db.records.push_back({grid[0], curve});

    const auto perfect = evaluate_predictor(constant_model(0.85, 3), db, 3);
    CHECK(perfect.mse == doctest::Approx(0.0));
    CHECK(perfect.fallback_rate == doctest::Approx(0.0));

    const auto gated = evaluate_predictor(constant_model(2.0, 3), db, 3);
    CHECK(gated.fallback_rate == doctest::Approx(1.0));

    CHECK_THROWS(evaluate_predictor(constant_model(0.5, 3), Database{axes, {}, 0}, 3));
}

TEST_CASE("predictor beats the mean baseline on a synthetic held-out set") {
    const auto axes = default_axes();
    SyntheticSurface::Options opts;
    opts.noise_sigma = 0.01;
    const SyntheticSurface trainer(axes, opts);
    auto settings = sample_settings(axes, 1.0, 21);
    settings.resize(44);
    const auto db = build_database(axes, settings, trainer, 30, 21);
    const auto [train_db, test_db] = split(db, 35, 21);

    const std::size_t k = 3;
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (const auto& rec : train_db.records) {
        X.push_back(extract_features(rec.curve, k));
        y.push_back(*rec.curve.final_accuracy);
    }
    const auto model = train_svr(X, y, KernelSpec::gaussian(1.0 / 3.0), {10.0, 0.01});
    const auto report = evaluate_predictor(model, test_db, k);

    std::vector<double> targets;
    for (const auto& rec : test_db.records)
        targets.push_back(*rec.curve.final_accuracy);
    const double mean =
        std::accumulate(targets.begin(), targets.end(), 0.0) / targets.size();
    double variance = 0.0;
    for (double t : targets)
        variance += (t - mean) * (t - mean);
    variance /= targets.size();

    CHECK(report.mse < variance);
}
