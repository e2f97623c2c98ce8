#include "curvepred/config.hpp"

#include <fstream>
#include <stdexcept>

#include "curvepred/trainers.hpp"
#include "text_io.hpp"

namespace curvepred {

double RunConfig::effective_gamma() const {
    return gamma > 0.0 ? gamma : 1.0 / static_cast<double>(k);
}

RunConfig default_config() {
    RunConfig cfg;
    cfg.axes = default_axes();
    cfg.explorer.k = cfg.k;
    cfg.explorer.fin_epoch = cfg.fin_epoch;
    return cfg;
}

namespace {

[[noreturn]] void bad_key(const std::string& section, const std::string& key) {
    throw std::runtime_error("unknown config key '" + key + "' in section [" + section +
                             "]");
}

std::vector<AxisValue> parse_values(AxisKind kind, const std::string& csv) {
    std::vector<AxisValue> out;
    for (const auto& piece : text::split(csv, ','))
        out.push_back(axis_value_from_string(kind, std::string(text::trim(piece))));
    return out;
}

void set_axis(std::vector<HyperParamAxis>& axes, const std::string& name,
              AxisKind kind, const std::string& value) {
    for (auto& axis : axes) {
        if (axis.name == name) {
            axis.values = parse_values(kind, value);
            return;
        }
    }
    axes.push_back({name, kind, parse_values(kind, value)});
}

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config '" + path + "'");

    RunConfig cfg = default_config();
    std::string section, line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#')
            continue;
        if (trimmed.front() == '[') {
            if (trimmed.back() != ']')
                throw std::runtime_error("config line " + std::to_string(line_no) +
                                         ": malformed section header");
            section = std::string(trimmed.substr(1, trimmed.size() - 2));
            if (section != "trainer" && section != "axes" && section != "database" &&
                section != "svr" && section != "predictor" && section != "explorer")
                throw std::runtime_error("unknown config section [" + section + "]");
            continue;
        }
        const auto eq = trimmed.find('=');
        if (eq == std::string_view::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key = value");
        const std::string key{text::trim(trimmed.substr(0, eq))};
        const std::string value{text::trim(trimmed.substr(eq + 1))};

        if (section == "trainer") {
            if (key == "kind") {
                if (value != "synthetic" && value != "classifier")
                    throw std::runtime_error("trainer kind must be synthetic or classifier");
                cfg.trainer_kind = value;
            } else if (key == "noise_sigma")
                cfg.noise_sigma = text::parse_double(value);
            else if (key == "patience")
                cfg.patience = static_cast<int>(text::parse_int(value));
            else if (key == "n_classes")
                cfg.n_classes = static_cast<std::size_t>(text::parse_int(value));
            else if (key == "dim")
                cfg.dim = static_cast<std::size_t>(text::parse_int(value));
            else if (key == "samples_per_class")
                cfg.samples_per_class = static_cast<std::size_t>(text::parse_int(value));
            else if (key == "hidden_units")
                cfg.hidden_units = static_cast<std::size_t>(text::parse_int(value));
            else if (key == "spread")
                cfg.spread = text::parse_double(value);
            else if (key == "dataset_seed")
                cfg.dataset_seed = static_cast<std::uint64_t>(text::parse_int(value));
            else if (key == "classifier_patience")
                cfg.classifier_patience = static_cast<int>(text::parse_int(value));
            else
                bad_key(section, key);
        } else if (section == "axes") {
            if (key == "lr")
                set_axis(cfg.axes, "lr", AxisKind::Real, value);
            else if (key == "batch")
                set_axis(cfg.axes, "batch", AxisKind::Integer, value);
            else if (key == "optimizer")
                set_axis(cfg.axes, "optimizer", AxisKind::Categorical, value);
            else
                bad_key(section, key);
        } else if (section == "database") {
            if (key == "fraction")
                cfg.fraction = text::parse_double(value);
            else if (key == "n_records")
                cfg.n_records = static_cast<std::size_t>(text::parse_int(value));
            else if (key == "fin_epoch")
                cfg.fin_epoch = static_cast<int>(text::parse_int(value));
            else if (key == "n_train")
                cfg.n_train = static_cast<std::size_t>(text::parse_int(value));
            else
                bad_key(section, key);
        } else if (section == "svr") {
            if (key == "c")
                cfg.svr_hyper.C = text::parse_double(value);
            else if (key == "epsilon")
                cfg.svr_hyper.epsilon = text::parse_double(value);
            else if (key == "gamma")
                cfg.gamma = text::parse_double(value);
            else if (key == "degree")
                cfg.degree = static_cast<int>(text::parse_int(value));
            else if (key == "coef0")
                cfg.coef0 = text::parse_double(value);
            else if (key == "tol")
                cfg.tol = text::parse_double(value);
            else
                bad_key(section, key);
        } else if (section == "predictor") {
            if (key == "k")
                cfg.k = static_cast<std::size_t>(text::parse_int(value));
            else
                bad_key(section, key);
        } else if (section == "explorer") {
            if (key == "delta")
                cfg.explorer.delta = text::parse_double(value);
            else if (key == "radius")
                cfg.explorer.radius = static_cast<std::size_t>(text::parse_int(value));
            else if (key == "threshold")
                cfg.explorer.threshold = text::parse_double(value);
            else if (key == "max_iterations")
                cfg.explorer.max_iterations = static_cast<std::size_t>(text::parse_int(value));
            else if (key == "p_floor")
                cfg.explorer.p_floor = text::parse_double(value);
            else if (key == "top_n")
                cfg.explorer.top_n = static_cast<std::size_t>(text::parse_int(value));
            else
                bad_key(section, key);
        } else {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": key outside any section");
        }
    }
    cfg.explorer.k = cfg.k;
    cfg.explorer.fin_epoch = cfg.fin_epoch;
    for (const auto& axis : cfg.axes)
        axis.validate();
    return cfg;
}

} // namespace curvepred
