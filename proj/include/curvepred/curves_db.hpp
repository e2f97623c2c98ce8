#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "curvepred/trainers.hpp"
#include "curvepred/types.hpp"

namespace curvepred {

// All settings of the Cartesian grid, in lexicographic axis order.
// Throws std::invalid_argument on an empty axis list.
std::vector<Setting> enumerate_grid(const std::vector<HyperParamAxis>& axes);

// ceil(fraction * grid size) distinct settings drawn uniformly without
// replacement; deterministic per seed. fraction must lie in (0, 1].
std::vector<Setting> sample_settings(const std::vector<HyperParamAxis>& axes,
                                     double fraction, std::uint64_t rng_seed);

// Fully trains every setting and collects the records. A trainer failure
// skips that setting; failures are reported through on_error when given.
Database build_database(const std::vector<HyperParamAxis>& axes,
                        const std::vector<Setting>& settings,
                        const Trainer& trainer, int fin_epoch,
                        std::uint64_t rng_seed,
                        const std::function<void(const Setting&, const std::string&)>&
                            on_error = {});

// Disjoint deterministic partition into (n_train, rest).
std::pair<Database, Database> split(const Database& db, std::size_t n_train,
                                    std::uint64_t rng_seed);

void save_csv(const Database& db, const std::string& path);

// Loads and validates a database against the given axes. Throws
// std::runtime_error naming the line and field on malformed input.
Database load_csv(const std::string& path, const std::vector<HyperParamAxis>& axes);

} // namespace curvepred
