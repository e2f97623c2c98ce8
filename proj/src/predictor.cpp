#include "curvepred/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "text_io.hpp"

namespace curvepred {

std::vector<double> extract_features(const LearningCurve& curve, std::size_t k) {
    if (k < 1)
        throw std::invalid_argument("k must be >= 1");
    if (k > curve.epoch_accuracies.size())
        throw std::invalid_argument("k exceeds curve length");
    return {curve.epoch_accuracies.begin(), curve.epoch_accuracies.begin() + k};
}

PredictionOutcome predict_final_accuracy(const SvrModel& model,
                                         std::span<const double> prefix,
                                         int fin_epoch) {
    if (prefix.size() < 2)
        throw std::invalid_argument("prefix must have at least 2 epochs");
    for (double a : prefix)
        if (!(a >= 0.0 && a <= 1.0))
            throw std::invalid_argument("prefix accuracy outside [0,1]");

    PredictionOutcome out;
    out.svr_raw = predict(model, prefix);
    const double acc_max = *std::max_element(prefix.begin(), prefix.end());

    // accept the SVR value only when strictly above the observed maximum
    // and at most 1
    if (out.svr_raw > acc_max && out.svr_raw <= 1.0) {
        out.source = PredictionSource::Svr;
        out.value = out.svr_raw;
        return out;
    }

    std::vector<std::pair<int, double>> points;
    points.reserve(prefix.size());
    for (std::size_t i = 0; i < prefix.size(); ++i)
        points.emplace_back(static_cast<int>(i + 1), prefix[i]);
    out.fit = fit_power_law(points, acc_max, fin_epoch);
    out.source = PredictionSource::CurveFit;
    out.value = predict_final(*out.fit);
    return out;
}

EvaluationReport evaluate_predictor(const SvrModel& model, const Database& test_db,
                                    std::size_t k) {
    if (test_db.records.empty())
        throw std::invalid_argument("empty test set");
    EvaluationReport report;
    double sq_sum = 0.0;
    std::size_t fallbacks = 0;
    for (std::size_t i = 0; i < test_db.records.size(); ++i) {
        const auto& rec = test_db.records[i];
        if (!rec.curve.final_accuracy)
            throw std::invalid_argument("test record " + std::to_string(i) +
                                        " has no final accuracy");
        const auto feats = extract_features(rec.curve, k);
        const auto outcome = predict_final_accuracy(model, feats, rec.curve.fin_epoch);

        EvaluationRow row;
        row.record_id = i;
        row.true_final = *rec.curve.final_accuracy;
        row.predicted = outcome.value;
        row.source = outcome.source;
        row.abs_error = std::abs(row.predicted - row.true_final);
        sq_sum += row.abs_error * row.abs_error;
        if (outcome.source == PredictionSource::CurveFit)
            ++fallbacks;
        report.rows.push_back(row);
    }
    report.mse = sq_sum / static_cast<double>(report.rows.size());
    report.fallback_rate =
        static_cast<double>(fallbacks) / static_cast<double>(report.rows.size());
    return report;
}

void save_evaluation_csv(const EvaluationReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "record_id,true_final,predicted,source,abs_error\n";
    for (const auto& row : report.rows) {
        out << row.record_id << ',' << text::format_double(row.true_final) << ','
            << text::format_double(row.predicted) << ','
            << (row.source == PredictionSource::Svr ? "svr" : "curve_fit") << ','
            << text::format_double(row.abs_error) << '\n';
    }
    out << "summary,mse," << text::format_double(report.mse) << ",fallback_rate,"
        << text::format_double(report.fallback_rate) << '\n';
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace curvepred
