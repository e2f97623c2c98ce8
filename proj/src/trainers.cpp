#include "curvepred/trainers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "curvepred/kernels.hpp"

namespace curvepred {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over the combined word
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t setting_seed(std::uint64_t seed, const std::vector<std::size_t>& idx) {
    std::uint64_t h = seed;
    for (std::size_t i : idx)
        h = mix(h, i);
    return h;
}

} // namespace

std::vector<HyperParamAxis> default_axes() {
    HyperParamAxis lr{"lr", AxisKind::Real, {}};
    for (int i = 0; i < 8; ++i)
        lr.values.emplace_back(std::pow(10.0, -4.0 + 3.0 * i / 7.0));
    HyperParamAxis batch{"batch", AxisKind::Integer,
                         {std::int64_t{16}, std::int64_t{32}, std::int64_t{64},
                          std::int64_t{128}}};
    HyperParamAxis opt{"optimizer", AxisKind::Categorical,
                       {std::string("sgd"), std::string("momentum"), std::string("adam")}};
    return {lr, batch, opt};
}

// ---------------------------------------------------------------------------
// SyntheticSurface

SyntheticSurface::SyntheticSurface(std::vector<HyperParamAxis> axes)
    : SyntheticSurface(std::move(axes), Options{}) {}

SyntheticSurface::SyntheticSurface(std::vector<HyperParamAxis> axes, Options opts)
    : axes_(std::move(axes)), opts_(opts) {
    if (axes_.size() != 3)
        throw std::invalid_argument("SyntheticSurface expects 3 axes (lr, batch, optimizer)");
    for (const auto& axis : axes_)
        axis.validate();
    if (opts_.opt_lr >= axes_[0].size() || opts_.opt_batch >= axes_[1].size() ||
        opts_.opt_optimizer >= axes_[2].size())
        throw std::invalid_argument("surface optimum outside the grid");
    if (!(opts_.peak > 0.0 && opts_.peak <= 1.0))
        throw std::invalid_argument("peak must lie in (0,1]");
}

double SyntheticSurface::plateau(const Setting& setting) const {
    const auto idx = setting_indices(axes_, setting);
    const double d_lr = static_cast<double>(idx[0]) - static_cast<double>(opts_.opt_lr);
    const double d_b = static_cast<double>(idx[1]) - static_cast<double>(opts_.opt_batch);
    const double d_o = idx[2] == opts_.opt_optimizer ? 0.0 : 1.0;
    const double a = opts_.peak - opts_.lr_weight * d_lr * d_lr -
                     opts_.batch_weight * d_b * d_b - opts_.optimizer_weight * d_o;
    return std::clamp(a, 0.01, 1.0);
}

double SyntheticSurface::rate(const Setting& setting) const {
    const auto idx = setting_indices(axes_, setting);
    return 0.4 + 0.08 * static_cast<double>(idx[0]) +
           0.05 * static_cast<double>(idx[1]);
}

Setting SyntheticSurface::optimum() const {
    Setting s;
    s.values = {axes_[0].values[opts_.opt_lr], axes_[1].values[opts_.opt_batch],
                axes_[2].values[opts_.opt_optimizer]};
    return s;
}

LearningCurve SyntheticSurface::train(const Setting& setting, int epochs,
                                      std::uint64_t seed) const {
    if (epochs < 1)
        throw std::invalid_argument("epochs must be >= 1");
    const auto idx = setting_indices(axes_, setting);
    const double a_inf = plateau(setting);
    const double kappa = rate(setting);

    std::mt19937_64 rng(setting_seed(seed, idx));
    std::normal_distribution<double> noise(0.0, opts_.noise_sigma);

    LearningCurve curve;
    curve.fin_epoch = epochs;
    double best = -1.0;
    int stall = 0;
    for (int e = 1; e <= epochs; ++e) {
        double a = a_inf * (1.0 - std::exp(-kappa * e));
        if (opts_.noise_sigma > 0.0)
            a += noise(rng);
        a = std::clamp(a, 0.0, 1.0);
        curve.epoch_accuracies.push_back(a);
        if (opts_.patience > 0) {
            if (a > best + opts_.min_improvement) {
                best = a;
                stall = 0;
            } else if (++stall >= opts_.patience) {
                break;
            }
        }
    }
    curve.final_accuracy = curve.epoch_accuracies.back();
    return curve;
}

// ---------------------------------------------------------------------------
// Optimizer steps

void sgd_step(std::span<double> params, std::span<const double> grads, double lr) {
    kernels::axpy(-lr, grads, params);
}

void momentum_step(std::span<double> params, std::span<const double> grads,
                   std::span<double> velocity, double lr, double mu) {
    if (velocity.size() != params.size() || grads.size() != params.size())
        throw std::invalid_argument("momentum_step: size mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
        velocity[i] = mu * velocity[i] + grads[i];
        params[i] -= lr * velocity[i];
    }
}

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state, double lr, double beta1, double beta2, double eps) {
    if (state.m.empty()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
    }
    if (state.m.size() != params.size() || grads.size() != params.size())
        throw std::invalid_argument("adam_step: size mismatch");
    ++state.step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grads[i];
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grads[i] * grads[i];
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
}

// ---------------------------------------------------------------------------
// Blob dataset and MLP

BlobDataset make_blobs(std::size_t n_classes, std::size_t dim,
                       std::size_t samples_per_class, double spread,
                       std::uint64_t seed) {
    if (n_classes < 2 || dim < 1 || samples_per_class < 1)
        throw std::invalid_argument("make_blobs: bad shape parameters");
    BlobDataset data;
    data.dim = dim;
    data.n_classes = n_classes;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double two_pi = 6.283185307179586;
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::vector<double> center(dim, 0.0);
        const double angle = two_pi * static_cast<double>(c) / static_cast<double>(n_classes);
        center[0] = 2.0 * std::cos(angle);
        if (dim > 1)
            center[1] = 2.0 * std::sin(angle);
        for (std::size_t s = 0; s < samples_per_class; ++s) {
            for (std::size_t d = 0; d < dim; ++d)
                data.x.push_back(center[d] + spread * gauss(rng));
            data.labels.push_back(static_cast<int>(c));
        }
    }
    return data;
}

MlpModel MlpModel::init(std::size_t in_dim, std::size_t hidden, std::size_t out_dim,
                        std::uint64_t seed) {
    MlpModel m;
    m.in_dim = in_dim;
    m.hidden = hidden;
    m.out_dim = out_dim;
    const std::size_t n = hidden > 0
                              ? hidden * in_dim + hidden + out_dim * hidden + out_dim
                              : out_dim * in_dim + out_dim;
    m.params.resize(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double scale1 = 1.0 / std::sqrt(static_cast<double>(in_dim));
    const double scale2 =
        hidden > 0 ? 1.0 / std::sqrt(static_cast<double>(hidden)) : scale1;
    std::size_t i = 0;
    if (hidden > 0) {
        for (; i < hidden * in_dim; ++i) m.params[i] = scale1 * gauss(rng);
        for (; i < hidden * in_dim + hidden; ++i) m.params[i] = 0.0;
        for (; i < hidden * in_dim + hidden + out_dim * hidden; ++i)
            m.params[i] = scale2 * gauss(rng);
    } else {
        for (; i < out_dim * in_dim; ++i) m.params[i] = scale1 * gauss(rng);
    }
    for (; i < n; ++i) m.params[i] = 0.0;
    return m;
}

namespace {

// Forward pass scratch; z2 receives the output logits.
struct Forward {
    std::vector<double> z1, h, z2, prob;
};

void forward_pass(const MlpModel& m, std::span<const double> x, Forward& f) {
    const double* p = m.params.data();
    if (m.hidden > 0) {
        const std::size_t w1 = m.hidden * m.in_dim;
        f.z1.resize(m.hidden);
        kernels::matvec({p, w1}, m.hidden, m.in_dim, x, f.z1);
        for (std::size_t j = 0; j < m.hidden; ++j) f.z1[j] += p[w1 + j];
        f.h.resize(m.hidden);
        for (std::size_t j = 0; j < m.hidden; ++j) f.h[j] = std::max(f.z1[j], 0.0);
        const std::size_t w2 = w1 + m.hidden;
        f.z2.resize(m.out_dim);
        kernels::matvec({p + w2, m.out_dim * m.hidden}, m.out_dim, m.hidden, f.h, f.z2);
        const std::size_t b2 = w2 + m.out_dim * m.hidden;
        for (std::size_t o = 0; o < m.out_dim; ++o) f.z2[o] += p[b2 + o];
    } else {
        f.z2.resize(m.out_dim);
        kernels::matvec({p, m.out_dim * m.in_dim}, m.out_dim, m.in_dim, x, f.z2);
        for (std::size_t o = 0; o < m.out_dim; ++o)
            f.z2[o] += p[m.out_dim * m.in_dim + o];
    }
}

// Stable softmax; returns log(sum(exp(z - zmax))).
double softmax(const std::vector<double>& z, std::vector<double>& prob) {
    const double zmax = *std::max_element(z.begin(), z.end());
    prob.resize(z.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        prob[i] = std::exp(z[i] - zmax);
        sum += prob[i];
    }
    for (double& v : prob) v /= sum;
    return std::log(sum);
}

} // namespace

double MlpModel::loss_and_grad(const BlobDataset& data,
                               std::span<const std::size_t> batch,
                               std::vector<double>* grads) const {
    if (batch.empty())
        throw std::invalid_argument("empty batch");
    if (grads)
        grads->assign(params.size(), 0.0);

    Forward f;
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    const std::size_t w1 = hidden * in_dim;
    const std::size_t w2 = w1 + hidden;
    const std::size_t b2 = w2 + out_dim * hidden;

    std::vector<double> dz2, dh;
    for (std::size_t row : batch) {
        const std::span<const double> x{data.x.data() + row * in_dim, in_dim};
        const int label = data.labels[row];
        forward_pass(*this, x, f);
        const double log_sum = softmax(f.z2, f.prob);
        const double zmax = *std::max_element(f.z2.begin(), f.z2.end());
        loss += inv_n * (log_sum + zmax - f.z2[static_cast<std::size_t>(label)]);
        if (!grads)
            continue;

        dz2 = f.prob;
        dz2[static_cast<std::size_t>(label)] -= 1.0;
        for (double& v : dz2) v *= inv_n;

        double* g = grads->data();
        if (hidden > 0) {
            for (std::size_t o = 0; o < out_dim; ++o) {
                kernels::axpy(dz2[o], f.h, {g + w2 + o * hidden, hidden});
                g[b2 + o] += dz2[o];
            }
            dh.assign(hidden, 0.0);
            for (std::size_t o = 0; o < out_dim; ++o)
                kernels::axpy(dz2[o], {params.data() + w2 + o * hidden, hidden}, dh);
            for (std::size_t j = 0; j < hidden; ++j) {
                if (f.z1[j] <= 0.0)
                    continue;
                kernels::axpy(dh[j], x, {g + j * in_dim, in_dim});
                g[w1 + j] += dh[j];
            }
        } else {
            for (std::size_t o = 0; o < out_dim; ++o) {
                kernels::axpy(dz2[o], x, {g + o * in_dim, in_dim});
                g[out_dim * in_dim + o] += dz2[o];
            }
        }
    }
    return loss;
}

int MlpModel::predict_class(std::span<const double> x) const {
    Forward f;
    forward_pass(*this, x, f);
    return static_cast<int>(
        std::max_element(f.z2.begin(), f.z2.end()) - f.z2.begin());
}

double MlpModel::accuracy(const BlobDataset& data,
                          std::span<const std::size_t> rows) const {
    if (rows.empty())
        throw std::invalid_argument("accuracy over empty row set");
    std::size_t correct = 0;
    for (std::size_t row : rows) {
        const std::span<const double> x{data.x.data() + row * in_dim, in_dim};
        if (predict_class(x) == data.labels[row])
            ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(rows.size());
}

// ---------------------------------------------------------------------------
// BlobClassifierTrainer

BlobClassifierTrainer::BlobClassifierTrainer() : BlobClassifierTrainer(Options{}) {}

BlobClassifierTrainer::BlobClassifierTrainer(Options opts) : opts_(std::move(opts)) {
    axes_ = opts_.axes.empty() ? default_axes() : opts_.axes;
    for (const auto& axis : axes_)
        axis.validate();
    data_ = make_blobs(opts_.n_classes, opts_.dim, opts_.samples_per_class,
                       opts_.spread, opts_.dataset_seed);
    // deterministic 70/30 train/validation split
    std::vector<std::size_t> order(data_.rows());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(mix(opts_.dataset_seed, 0x517ULL));
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t n_train = (order.size() * 7) / 10;
    train_rows_.assign(order.begin(), order.begin() + n_train);
    val_rows_.assign(order.begin() + n_train, order.end());
}

LearningCurve BlobClassifierTrainer::train(const Setting& setting, int epochs,
                                           std::uint64_t seed) const {
    if (epochs < 1)
        throw std::invalid_argument("epochs must be >= 1");
    const auto idx = setting_indices(axes_, setting);
    const double lr = std::get<double>(setting.value(axes_, "lr"));
    const auto batch_size =
        static_cast<std::size_t>(std::get<std::int64_t>(setting.value(axes_, "batch")));
    const auto& opt = std::get<std::string>(setting.value(axes_, "optimizer"));
    if (!(lr >= 0.0))
        throw std::invalid_argument("negative learning rate");

    const std::uint64_t run_seed = setting_seed(seed, idx);
    MlpModel model = MlpModel::init(data_.dim, opts_.hidden_units, data_.n_classes,
                                    mix(run_seed, 1));
    std::mt19937_64 rng(mix(run_seed, 2));

    std::vector<double> grads, velocity(model.n_params(), 0.0);
    AdamState adam;

    LearningCurve curve;
    curve.fin_epoch = epochs;
    std::vector<std::size_t> order = train_rows_;
    double best = -1.0;
    int stall = 0;
    bool blew_up = false;

    for (int e = 1; e <= epochs && !blew_up; ++e) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t len = std::min(batch_size, order.size() - start);
            const double loss = model.loss_and_grad(
                data_, {order.data() + start, len}, &grads);
            if (!std::isfinite(loss)) {
                blew_up = true;
                break;
            }
            if (opt == "sgd")
                sgd_step(model.params, grads, lr);
            else if (opt == "momentum")
                momentum_step(model.params, grads, velocity, lr);
            else if (opt == "adam")
                adam_step(model.params, grads, adam, lr);
            else
                throw std::invalid_argument("unknown optimizer '" + opt + "'");
        }
        if (!blew_up) {
            const double acc = model.accuracy(data_, val_rows_);
            curve.epoch_accuracies.push_back(acc);
            if (acc > best + opts_.min_improvement) {
                best = acc;
                stall = 0;
            } else if (opts_.patience > 0 && ++stall >= opts_.patience) {
                break;
            }
        }
    }

    if (curve.epoch_accuracies.empty()) {
        // divergence on the very first epoch: report chance level throughout
        const double chance = 1.0 / static_cast<double>(data_.n_classes);
        curve.epoch_accuracies.assign(static_cast<std::size_t>(epochs), chance);
    }
    curve.final_accuracy = curve.epoch_accuracies.back();
    return curve;
}

} // namespace curvepred
