#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "curvepred/predictor.hpp"
#include "curvepred/trainers.hpp"
#include "curvepred/types.hpp"

namespace curvepred {

struct ExplorerConfig {
    double delta = 0.05;        // probability mass moved per update
    std::size_t radius = 1;     // neighbourhood half-width in index space
    double threshold = 0.8;     // per-axis convergence threshold t_i
    std::size_t max_iterations = 200;
    double p_floor = 0.01;
    std::size_t k = 3;          // prefix epochs fed to the predictor
    std::size_t top_n = 10;
    int fin_epoch = 30;
};

struct HistoryEntry {
    std::size_t iteration = 0;
    Setting setting;
    double reward = 0.0;
    PredictionSource source = PredictionSource::Svr;
};

struct ExplorerState {
    std::vector<std::vector<double>> probabilities; // one vector per axis
    std::optional<double> last_reward;
    std::vector<HistoryEntry> history;
    std::size_t iteration = 0;
};

ExplorerState init_state(const std::vector<HyperParamAxis>& axes,
                         const ExplorerConfig& config);

Setting sample_setting(const std::vector<HyperParamAxis>& axes,
                       const ExplorerState& state, std::mt19937_64& rng);

// Moves delta of probability mass between the chosen value's neighbourhood
// and its complement, in the direction of the reward change; the first call
// only records the baseline reward. Probabilities stay >= p_floor and sum
// to 1.
void update_probabilities(ExplorerState& state,
                          const std::vector<HyperParamAxis>& axes,
                          const ExplorerConfig& config, const Setting& chosen,
                          double reward);

// The argmax setting when every axis max probability strictly exceeds the
// threshold; ties broken by lowest index.
std::optional<Setting> converged(const std::vector<HyperParamAxis>& axes,
                                 const ExplorerState& state,
                                 const ExplorerConfig& config);

struct TopEntry {
    Setting setting;
    double predicted = 0.0;
    double final_accuracy = 0.0;
};

struct ExplorationResult {
    Setting best_setting;
    double best_accuracy = 0.0;
    std::vector<HistoryEntry> history;
    std::vector<TopEntry> top;
};

// Full exploration loop: sample, partial-train k epochs, predict the final
// accuracy as the reward, update; then fully retrain the top_n distinct
// settings with the highest predicted rewards and return the best.
ExplorationResult explore(const std::vector<HyperParamAxis>& axes,
                          const ExplorerConfig& config, const Trainer& trainer,
                          const SvrModel& svr_model, std::mt19937_64& rng,
                          const std::function<void(const std::string&)>& log = {});

void save_history_csv(const std::vector<HyperParamAxis>& axes,
                      const std::vector<HistoryEntry>& history,
                      const std::string& path);

void save_top_csv(const std::vector<HyperParamAxis>& axes,
                  const std::vector<TopEntry>& top, const std::string& path);

} // namespace curvepred
