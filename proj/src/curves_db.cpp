#include "curvepred/curves_db.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "text_io.hpp"

namespace curvepred {

std::vector<Setting> enumerate_grid(const std::vector<HyperParamAxis>& axes) {
    if (axes.empty())
        throw std::invalid_argument("empty grid");
    for (const auto& axis : axes)
        axis.validate();

    std::size_t total = 1;
    for (const auto& axis : axes)
        total *= axis.size();

    std::vector<Setting> grid;
    grid.reserve(total);
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
        Setting s;
        s.values.reserve(axes.size());
        for (std::size_t i = 0; i < axes.size(); ++i)
            s.values.push_back(axes[i].values[idx[i]]);
        grid.push_back(std::move(s));
        // lexicographic increment, last axis fastest
        for (std::size_t i = axes.size(); i-- > 0;) {
            if (++idx[i] < axes[i].size())
                break;
            idx[i] = 0;
        }
    }
    return grid;
}

std::vector<Setting> sample_settings(const std::vector<HyperParamAxis>& axes,
                                     double fraction, std::uint64_t rng_seed) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("fraction must lie in (0, 1]");
    auto grid = enumerate_grid(axes);
    const auto want = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(grid.size())));

    std::mt19937_64 rng(rng_seed);
    // partial Fisher-Yates: first `want` entries are a uniform sample
    for (std::size_t i = 0; i < want; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, grid.size() - 1);
        std::swap(grid[i], grid[pick(rng)]);
    }
    grid.resize(want);
    return grid;
}

Database build_database(const std::vector<HyperParamAxis>& axes,
                        const std::vector<Setting>& settings,
                        const Trainer& trainer, int fin_epoch,
                        std::uint64_t rng_seed,
                        const std::function<void(const Setting&, const std::string&)>&
                            on_error) {
    if (fin_epoch < 1)
        throw std::invalid_argument("fin_epoch must be >= 1");
    Database db;
    db.axes = axes;
    db.seed = rng_seed;

    std::set<std::vector<std::size_t>> seen;
    for (std::size_t i = 0; i < settings.size(); ++i) {
        const auto& setting = settings[i];
        auto idx = setting_indices(axes, setting);
        if (!seen.insert(idx).second)
            throw std::invalid_argument("duplicate setting in database build");
        try {
            LearningCurve curve = trainer.train(setting, fin_epoch, rng_seed + i);
            curve.fin_epoch = fin_epoch;
            if (!curve.final_accuracy)
                curve.final_accuracy = curve.epoch_accuracies.back();
            curve.validate();
            db.records.push_back({setting, std::move(curve)});
        } catch (const std::exception& e) {
            if (on_error)
                on_error(setting, e.what());
        }
    }
    return db;
}

std::pair<Database, Database> split(const Database& db, std::size_t n_train,
                                    std::uint64_t rng_seed) {
    if (n_train == 0 || n_train >= db.records.size())
        throw std::invalid_argument("n_train must lie in (0, record count)");
    std::vector<std::size_t> order(db.records.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(rng_seed);
    std::shuffle(order.begin(), order.end(), rng);

    Database train{db.axes, {}, rng_seed}, test{db.axes, {}, rng_seed};
    for (std::size_t i = 0; i < order.size(); ++i)
        (i < n_train ? train : test).records.push_back(db.records[order[i]]);
    return {std::move(train), std::move(test)};
}

void save_csv(const Database& db, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");

    out << "setting_id";
    for (const auto& axis : db.axes)
        out << ',' << axis.name;
    out << ",fin_epoch,final_accuracy,n_epochs";
    // rows are ragged; the header lists accuracy columns up to the longest row
    std::size_t max_epochs = 0;
    for (const auto& rec : db.records)
        max_epochs = std::max(max_epochs, rec.curve.epoch_accuracies.size());
    for (std::size_t e = 1; e <= max_epochs; ++e)
        out << ",acc_" << e;
    out << '\n';

    for (std::size_t i = 0; i < db.records.size(); ++i) {
        const auto& rec = db.records[i];
        out << i;
        for (const auto& v : rec.setting.values)
            out << ',' << axis_value_to_string(v);
        out << ',' << rec.curve.fin_epoch;
        out << ',' << text::format_double(rec.curve.final_accuracy.value());
        out << ',' << rec.curve.epoch_accuracies.size();
        for (double a : rec.curve.epoch_accuracies)
            out << ',' << text::format_double(a);
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

namespace {

[[noreturn]] void row_error(std::size_t line_no, const std::string& field,
                            const std::string& detail) {
    throw std::runtime_error("line " + std::to_string(line_no) + ", field '" + field +
                             "': " + detail);
}

double parse_accuracy(std::size_t line_no, const std::string& field,
                      const std::string& raw) {
    double v;
    try {
        v = text::parse_double(raw);
    } catch (const std::exception& e) {
        row_error(line_no, field, e.what());
    }
    if (!(v >= 0.0 && v <= 1.0))
        row_error(line_no, field, "accuracy " + raw + " outside [0,1]");
    return v;
}

} // namespace

Database load_csv(const std::string& path, const std::vector<HyperParamAxis>& axes) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    for (const auto& axis : axes)
        axis.validate();

    Database db;
    db.axes = axes;

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty database file '" + path + "'");

    std::set<std::vector<std::size_t>> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty())
            continue;
        const auto fields = text::split(std::string(text::trim(line)), ',');
        const std::size_t fixed = 1 + axes.size() + 3;
        if (fields.size() < fixed)
            row_error(line_no, "row", "expected at least " + std::to_string(fixed) +
                                          " fields, got " + std::to_string(fields.size()));

        TrainingRecord rec;
        std::size_t f = 1; // setting_id ignored on load
        for (const auto& axis : axes) {
            AxisValue v;
            try {
                v = axis_value_from_string(axis.kind, fields[f]);
            } catch (const std::exception& e) {
                row_error(line_no, axis.name, e.what());
            }
            if (!axis.index_of(v))
                row_error(line_no, axis.name,
                          "value " + fields[f] + " not on axis '" + axis.name + "'");
            rec.setting.values.push_back(std::move(v));
            ++f;
        }
        try {
            rec.curve.fin_epoch = static_cast<int>(text::parse_int(fields[f]));
        } catch (const std::exception& e) {
            row_error(line_no, "fin_epoch", e.what());
        }
        ++f;
        rec.curve.final_accuracy = parse_accuracy(line_no, "final_accuracy", fields[f]);
        ++f;
        std::size_t n_epochs = 0;
        try {
            n_epochs = static_cast<std::size_t>(text::parse_int(fields[f]));
        } catch (const std::exception& e) {
            row_error(line_no, "n_epochs", e.what());
        }
        ++f;
        if (fields.size() - f != n_epochs)
            row_error(line_no, "n_epochs",
                      "declares " + std::to_string(n_epochs) + " accuracies but row has " +
                          std::to_string(fields.size() - f));
        for (std::size_t e = 0; e < n_epochs; ++e, ++f)
            rec.curve.epoch_accuracies.push_back(
                parse_accuracy(line_no, "acc_" + std::to_string(e + 1), fields[f]));

        try {
            rec.curve.validate();
        } catch (const std::exception& e) {
            row_error(line_no, "curve", e.what());
        }
        if (!seen.insert(setting_indices(axes, rec.setting)).second)
            row_error(line_no, "setting", "duplicate setting");
        db.records.push_back(std::move(rec));
    }
    return db;
}

} // namespace curvepred
