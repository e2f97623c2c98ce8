#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "curvepred/types.hpp"

namespace curvepred {

// Behavioral contract shared by the synthetic simulator and the blob
// classifier. Implementations are stateless; train() is deterministic
// per (setting, epochs, seed).
class Trainer {
  public:
    virtual ~Trainer() = default;
    virtual LearningCurve train(const Setting& setting, int epochs,
                                std::uint64_t seed) const = 0;
    virtual std::vector<HyperParamAxis> axes() const = 0;
};

// Default hyper-parameter grid: 8 log-spaced learning rates, 4 batch
// sizes, 3 optimizer kinds (96 settings).
std::vector<HyperParamAxis> default_axes();

// ---------------------------------------------------------------------------
// Synthetic learning-curve simulator
//
// Each setting has a plateau A in (0,1] and a rate kappa > 0; the curve is
// a(e) = A * (1 - exp(-kappa * e)) + noise, clipped to [0,1]. The plateau
// surface has a unique argmax over the grid, which makes it a verification
// oracle for the explorer.

class SyntheticSurface final : public Trainer {
  public:
    struct Options {
        double noise_sigma = 0.01;
        // Index-space location of the optimum on (lr, batch, optimizer).
        std::size_t opt_lr = 4, opt_batch = 3, opt_optimizer = 2;
        double peak = 0.95;
        // Quadratic index-distance penalties per axis.
        double lr_weight = 0.004, batch_weight = 0.01, optimizer_weight = 0.05;
        // Early stopping; 0 disables.
        int patience = 0;
        double min_improvement = 1e-4;
    };

    explicit SyntheticSurface(std::vector<HyperParamAxis> axes);
    SyntheticSurface(std::vector<HyperParamAxis> axes, Options opts);

    LearningCurve train(const Setting& setting, int epochs,
                        std::uint64_t seed) const override;
    std::vector<HyperParamAxis> axes() const override { return axes_; }

    // Noiseless plateau of a setting; throws on unknown settings.
    double plateau(const Setting& setting) const;
    double rate(const Setting& setting) const;
    // The unique argmax of the plateau over the grid.
    Setting optimum() const;

  private:
    std::vector<HyperParamAxis> axes_;
    Options opts_;
};

// ---------------------------------------------------------------------------
// Optimizer steps (flat parameter vectors)

void sgd_step(std::span<double> params, std::span<const double> grads, double lr);

void momentum_step(std::span<double> params, std::span<const double> grads,
                   std::span<double> velocity, double lr, double mu = 0.9);

struct AdamState {
    std::vector<double> m, v;
    std::int64_t step = 0;
};

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, double lr, double beta1 = 0.9,
               double beta2 = 0.999, double eps = 1e-8);

// ---------------------------------------------------------------------------
// From-scratch classifier on generated Gaussian blobs

struct BlobDataset {
    std::size_t dim = 0, n_classes = 0;
    std::vector<double> x;      // row-major, n x dim
    std::vector<int> labels;    // n
    std::size_t rows() const { return labels.size(); }
};

BlobDataset make_blobs(std::size_t n_classes, std::size_t dim,
                       std::size_t samples_per_class, double spread,
                       std::uint64_t seed);

// One-hidden-layer ReLU network with softmax cross-entropy loss;
// hidden_units = 0 degrades to multinomial logistic regression.
struct MlpModel {
    std::size_t in_dim = 0, hidden = 0, out_dim = 0;
    std::vector<double> params;

    static MlpModel init(std::size_t in_dim, std::size_t hidden,
                         std::size_t out_dim, std::uint64_t seed);
    std::size_t n_params() const { return params.size(); }

    // Mean cross-entropy over the rows listed in `batch`; writes the
    // gradient (same layout as params) when grads is non-null.
    double loss_and_grad(const BlobDataset& data, std::span<const std::size_t> batch,
                         std::vector<double>* grads) const;
    int predict_class(std::span<const double> x) const;
    double accuracy(const BlobDataset& data, std::span<const std::size_t> rows) const;
};

class BlobClassifierTrainer final : public Trainer {
  public:
    struct Options {
        std::size_t n_classes = 3, dim = 2, samples_per_class = 80;
        double spread = 0.35;
        std::size_t hidden_units = 8;
        std::uint64_t dataset_seed = 7;
        int patience = 5;
        double min_improvement = 1e-4;
        std::vector<HyperParamAxis> axes; // empty -> default_axes()
    };

    BlobClassifierTrainer();
    explicit BlobClassifierTrainer(Options opts);

    LearningCurve train(const Setting& setting, int epochs,
                        std::uint64_t seed) const override;
    std::vector<HyperParamAxis> axes() const override { return axes_; }

    const BlobDataset& dataset() const { return data_; }

  private:
    Options opts_;
    std::vector<HyperParamAxis> axes_;
    BlobDataset data_;
    std::vector<std::size_t> train_rows_, val_rows_;
};

} // namespace curvepred
