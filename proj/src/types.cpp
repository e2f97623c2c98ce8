#include "curvepred/types.hpp"

#include <algorithm>
#include <stdexcept>

#include "text_io.hpp"

namespace curvepred {

void HyperParamAxis::validate() const {
    if (values.empty())
        throw std::invalid_argument("axis '" + name + "' has no values");
    for (const auto& v : values) {
        const bool kind_ok =
            (kind == AxisKind::Real && std::holds_alternative<double>(v)) ||
            (kind == AxisKind::Integer && std::holds_alternative<std::int64_t>(v)) ||
            (kind == AxisKind::Categorical && std::holds_alternative<std::string>(v));
        if (!kind_ok)
            throw std::invalid_argument("axis '" + name + "' has a value of the wrong kind");
    }
    if (kind == AxisKind::Real || kind == AxisKind::Integer) {
        for (std::size_t i = 1; i < values.size(); ++i)
            if (!(values[i - 1] < values[i]))
                throw std::invalid_argument("axis '" + name +
                                            "' values must be strictly increasing");
    } else {
        for (std::size_t i = 0; i < values.size(); ++i)
            for (std::size_t j = i + 1; j < values.size(); ++j)
                if (values[i] == values[j])
                    throw std::invalid_argument("axis '" + name + "' has duplicate values");
    }
}

std::optional<std::size_t> HyperParamAxis::index_of(const AxisValue& v) const {
    const auto it = std::find(values.begin(), values.end(), v);
    if (it == values.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - values.begin());
}

std::string axis_value_to_string(const AxisValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>)
                return text::format_double(x);
            else if constexpr (std::is_same_v<T, std::int64_t>)
                return std::to_string(x);
            else
                return x;
        },
        v);
}

AxisValue axis_value_from_string(AxisKind kind, const std::string& s) {
    switch (kind) {
        case AxisKind::Real: return text::parse_double(s);
        case AxisKind::Integer: return text::parse_int(s);
        case AxisKind::Categorical: return s;
    }
    throw std::logic_error("unreachable");
}

const AxisValue& Setting::value(const std::vector<HyperParamAxis>& axes,
                                const std::string& axis_name) const {
    for (std::size_t i = 0; i < axes.size(); ++i)
        if (axes[i].name == axis_name)
            return values.at(i);
    throw std::invalid_argument("unknown axis '" + axis_name + "'");
}

std::vector<std::size_t> setting_indices(const std::vector<HyperParamAxis>& axes,
                                         const Setting& setting) {
    if (setting.values.size() != axes.size())
        throw std::invalid_argument("setting has wrong number of values");
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const auto pos = axes[i].index_of(setting.values[i]);
        if (!pos)
            throw std::invalid_argument("setting value " + axis_value_to_string(setting.values[i]) +
                                        " not on axis '" + axes[i].name + "'");
        idx[i] = *pos;
    }
    return idx;
}

double LearningCurve::acc_max() const {
    if (epoch_accuracies.empty())
        throw std::logic_error("empty learning curve");
    return *std::max_element(epoch_accuracies.begin(), epoch_accuracies.end());
}

void LearningCurve::validate() const {
    if (epoch_accuracies.empty())
        throw std::invalid_argument("learning curve must have at least one epoch");
    if (fin_epoch < 1 || epoch_accuracies.size() > static_cast<std::size_t>(fin_epoch))
        throw std::invalid_argument("curve length exceeds fin_epoch");
    for (double a : epoch_accuracies)
        if (!(a >= 0.0 && a <= 1.0))
            throw std::invalid_argument("accuracy outside [0,1]");
    if (final_accuracy && !(*final_accuracy >= 0.0 && *final_accuracy <= 1.0))
        throw std::invalid_argument("final accuracy outside [0,1]");
}

} // namespace curvepred
