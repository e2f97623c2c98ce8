#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curvepred/explorer.hpp"
#include "curvepred/svr.hpp"
#include "curvepred/types.hpp"

namespace curvepred {

// Run configuration, loadable from a sectioned key=value file. Unknown
// sections or keys are rejected.
struct RunConfig {
    // [trainer]
    std::string trainer_kind = "synthetic"; // synthetic | classifier
    double noise_sigma = 0.01;
    int patience = 0; // synthetic early stopping; 0 disables
    std::size_t n_classes = 3, dim = 2, samples_per_class = 80, hidden_units = 8;
    double spread = 0.35;
    std::uint64_t dataset_seed = 7;
    int classifier_patience = 5;

    // [axes]
    std::vector<HyperParamAxis> axes;

    // [database]
    double fraction = 0.10;
    std::optional<std::size_t> n_records; // overrides fraction when set
    int fin_epoch = 30;
    std::size_t n_train = 35;

    // [svr]
    SvrHyper svr_hyper{10.0, 0.01};
    double gamma = 0.0; // 0 means 1/feature-dimension
    int degree = 3;
    double coef0 = 1.0;
    double tol = 1e-4;

    // [predictor]
    std::size_t k = 3;

    // [explorer]
    ExplorerConfig explorer;

    double effective_gamma() const;
};

RunConfig default_config();
RunConfig load_config(const std::string& path);

} // namespace curvepred
