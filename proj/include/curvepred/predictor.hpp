#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curvepred/power_fit.hpp"
#include "curvepred/svr.hpp"
#include "curvepred/types.hpp"

namespace curvepred {

enum class PredictionSource { Svr, CurveFit };

struct PredictionOutcome {
    double value = 0.0;
    PredictionSource source = PredictionSource::Svr;
    double svr_raw = 0.0;
    std::optional<PowerFit> fit;
};

// First k epoch accuracies of a curve, in epoch order.
std::vector<double> extract_features(const LearningCurve& curve, std::size_t k);

// The SVR prediction is accepted only when it is strictly above the prefix
// maximum and at most 1; otherwise the constrained power-law fit to the
// prefix supplies the value. prefix holds the accuracies of epochs 1..k.
PredictionOutcome predict_final_accuracy(const SvrModel& model,
                                         std::span<const double> prefix,
                                         int fin_epoch);

struct EvaluationRow {
    std::size_t record_id = 0;
    double true_final = 0.0;
    double predicted = 0.0;
    PredictionSource source = PredictionSource::Svr;
    double abs_error = 0.0;
};

struct EvaluationReport {
    std::vector<EvaluationRow> rows;
    double mse = 0.0;
    double fallback_rate = 0.0;
};

EvaluationReport evaluate_predictor(const SvrModel& model, const Database& test_db,
                                    std::size_t k);

void save_evaluation_csv(const EvaluationReport& report, const std::string& path);

} // namespace curvepred
