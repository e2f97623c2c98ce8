#include "curvepred/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "text_io.hpp"

namespace curvepred {

namespace {

void check_config(const std::vector<HyperParamAxis>& axes, const ExplorerConfig& cfg) {
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
        throw std::invalid_argument("delta must lie in (0,1)");
    if (!(cfg.threshold > 0.0 && cfg.threshold <= 1.0))
        throw std::invalid_argument("threshold must lie in (0,1]");
    if (cfg.max_iterations == 0 || cfg.top_n == 0)
        throw std::invalid_argument("max_iterations and top_n must be positive");
    if (!(cfg.p_floor >= 0.0))
        throw std::invalid_argument("p_floor must be nonnegative");
    for (const auto& axis : axes) {
        axis.validate();
        if (cfg.p_floor * static_cast<double>(axis.size()) >= 1.0)
            throw std::invalid_argument("p_floor too large for axis '" + axis.name + "'");
    }
}

// Clamp to the floor, then rescale the unclamped entries so the vector
// sums to 1 again; repeats while the rescale pushes new entries under.
void project_to_floor(std::vector<double>& p, double floor) {
    for (int pass = 0; pass < 64; ++pass) {
        double clamped_mass = 0.0, free_mass = 0.0;
        std::size_t n_clamped = 0;
        for (double v : p) {
            if (v <= floor) {
                clamped_mass += floor;
                ++n_clamped;
            } else {
                free_mass += v;
            }
        }
        if (n_clamped == p.size()) {
            std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
            return;
        }
        const double scale = (1.0 - clamped_mass) / free_mass;
        bool stable = true;
        for (double& v : p) {
            if (v <= floor) {
                v = floor;
            } else {
                v *= scale;
                if (v < floor)
                    stable = false;
            }
        }
        if (stable)
            return;
    }
}

} // namespace

ExplorerState init_state(const std::vector<HyperParamAxis>& axes,
                         const ExplorerConfig& config) {
    check_config(axes, config);
    ExplorerState state;
    for (const auto& axis : axes)
        state.probabilities.emplace_back(axis.size(), 1.0 / static_cast<double>(axis.size()));
    return state;
}

Setting sample_setting(const std::vector<HyperParamAxis>& axes,
                       const ExplorerState& state, std::mt19937_64& rng) {
    if (state.probabilities.size() != axes.size())
        throw std::invalid_argument("state does not match axes");
    Setting s;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        const auto& p = state.probabilities[a];
        std::discrete_distribution<std::size_t> dist(p.begin(), p.end());
        s.values.push_back(axes[a].values[dist(rng)]);
    }
    return s;
}

void update_probabilities(ExplorerState& state,
                          const std::vector<HyperParamAxis>& axes,
                          const ExplorerConfig& config, const Setting& chosen,
                          double reward) {
    if (!(reward >= 0.0 && reward <= 1.0))
        throw std::invalid_argument("reward outside [0,1]");
    const auto idx = setting_indices(axes, chosen);

    ++state.iteration;
    if (state.last_reward && reward != *state.last_reward) {
        const double direction = reward > *state.last_reward ? 1.0 : -1.0;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            auto& p = state.probabilities[a];
            const std::size_t n = p.size();
            // index-space neighbourhood; categorical axes have no ordering
            const std::size_t radius =
                axes[a].kind == AxisKind::Categorical ? 0 : config.radius;
            const std::size_t lo = idx[a] >= radius ? idx[a] - radius : 0;
            const std::size_t hi = std::min(idx[a] + radius, n - 1);
            const std::size_t n_in = hi - lo + 1;
            const std::size_t n_out = n - n_in;
            if (n_out == 0)
                continue;
            const double gain = direction * config.delta / static_cast<double>(n_in);
            const double loss = direction * config.delta / static_cast<double>(n_out);
            for (std::size_t i = 0; i < n; ++i)
                p[i] += (i >= lo && i <= hi) ? gain : -loss;
            project_to_floor(p, config.p_floor);
        }
    }
    state.last_reward = reward;
}

std::optional<Setting> converged(const std::vector<HyperParamAxis>& axes,
                                 const ExplorerState& state,
                                 const ExplorerConfig& config) {
    Setting s;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        const auto& p = state.probabilities[a];
        const auto best = std::max_element(p.begin(), p.end());
        if (!(*best > config.threshold))
            return std::nullopt;
        s.values.push_back(axes[a].values[static_cast<std::size_t>(best - p.begin())]);
    }
    return s;
}

ExplorationResult explore(const std::vector<HyperParamAxis>& axes,
                          const ExplorerConfig& config, const Trainer& trainer,
                          const SvrModel& svr_model, std::mt19937_64& rng,
                          const std::function<void(const std::string&)>& log) {
    ExplorerState state = init_state(axes, config);
    if (svr_model.dim != config.k)
        throw std::invalid_argument("SVR model trained with a different prefix length");

    for (std::size_t t = 1; t <= config.max_iterations; ++t) {
        if (converged(axes, state, config))
            break;
        const Setting setting = sample_setting(axes, state, rng);
        try {
            const LearningCurve curve =
                trainer.train(setting, static_cast<int>(config.k), rng());
            const auto feats = extract_features(curve, config.k);
            const auto outcome =
                predict_final_accuracy(svr_model, feats, config.fin_epoch);
            update_probabilities(state, axes, config, setting, outcome.value);
            state.history.push_back({t, setting, outcome.value, outcome.source});
        } catch (const std::exception& e) {
            if (log)
                log("iteration " + std::to_string(t) + " skipped: " + e.what());
        }
    }
    if (state.history.empty())
        throw std::runtime_error("exploration failed: no iteration succeeded");

    // distinct explored settings, best predicted reward first
    std::map<std::vector<std::size_t>, std::pair<double, Setting>> best_by_setting;
    for (const auto& h : state.history) {
        auto key = setting_indices(axes, h.setting);
        auto [it, inserted] = best_by_setting.try_emplace(std::move(key), h.reward, h.setting);
        if (!inserted && h.reward > it->second.first)
            it->second.first = h.reward;
    }
    std::vector<std::pair<double, Setting>> ranked;
    ranked.reserve(best_by_setting.size());
    for (auto& [key, v] : best_by_setting)
        ranked.push_back(std::move(v));
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    if (ranked.size() > config.top_n)
        ranked.resize(config.top_n);

    ExplorationResult result;
    result.history = state.history;
    for (auto& [predicted, setting] : ranked) {
        const LearningCurve curve = trainer.train(setting, config.fin_epoch, rng());
        const double final_acc = curve.final_accuracy.value_or(curve.epoch_accuracies.back());
        result.top.push_back({setting, predicted, final_acc});
        if (result.best_setting.values.empty() || final_acc > result.best_accuracy) {
            result.best_setting = setting;
            result.best_accuracy = final_acc;
        }
    }
    return result;
}

void save_history_csv(const std::vector<HyperParamAxis>& axes,
                      const std::vector<HistoryEntry>& history,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << 't';
    for (const auto& axis : axes)
        out << ',' << axis.name;
    out << ",reward,source\n";
    for (const auto& h : history) {
        out << h.iteration;
        for (const auto& v : h.setting.values)
            out << ',' << axis_value_to_string(v);
        out << ',' << text::format_double(h.reward) << ','
            << (h.source == PredictionSource::Svr ? "svr" : "curve_fit") << '\n';
    }
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

void save_top_csv(const std::vector<HyperParamAxis>& axes,
                  const std::vector<TopEntry>& top, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "rank";
    for (const auto& axis : axes)
        out << ',' << axis.name;
    out << ",predicted,final_accuracy\n";
    for (std::size_t i = 0; i < top.size(); ++i) {
        out << (i + 1);
        for (const auto& v : top[i].setting.values)
            out << ',' << axis_value_to_string(v);
        out << ',' << text::format_double(top[i].predicted) << ','
            << text::format_double(top[i].final_accuracy) << '\n';
    }
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace curvepred
