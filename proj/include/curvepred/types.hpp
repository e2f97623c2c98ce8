#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace curvepred {

// One admissible value on a hyper-parameter axis: a real (learning rate),
// a positive integer (batch size), or a symbolic tag (optimizer kind).
using AxisValue = std::variant<double, std::int64_t, std::string>;

enum class AxisKind { Real, Integer, Categorical };

struct HyperParamAxis {
    std::string name;
    AxisKind kind = AxisKind::Real;
    std::vector<AxisValue> values;

    std::size_t size() const { return values.size(); }
    // Throws std::invalid_argument on empty/duplicate/non-increasing values.
    void validate() const;
    // Index of a value on this axis, or nullopt if not a member.
    std::optional<std::size_t> index_of(const AxisValue& v) const;
};

std::string axis_value_to_string(const AxisValue& v);
AxisValue axis_value_from_string(AxisKind kind, const std::string& s);

// One chosen value per axis, in axis order.
struct Setting {
    std::vector<AxisValue> values;

    bool operator==(const Setting&) const = default;
    const AxisValue& value(const std::vector<HyperParamAxis>& axes,
                           const std::string& axis_name) const;
};

// Indices of a setting's values on their axes; throws if any value is
// not a member of its axis.
std::vector<std::size_t> setting_indices(const std::vector<HyperParamAxis>& axes,
                                         const Setting& setting);

struct LearningCurve {
    // epoch_accuracies[i] is the accuracy after epoch i+1.
    std::vector<double> epoch_accuracies;
    std::optional<double> final_accuracy;
    int fin_epoch = 1;

    double acc_max() const;
    void validate() const;
};

struct TrainingRecord {
    Setting setting;
    LearningCurve curve;
};

struct Database {
    std::vector<HyperParamAxis> axes;
    std::vector<TrainingRecord> records;
    std::uint64_t seed = 0;
};

} // namespace curvepred
