#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace monofit {

// One level of the explanatory variable with its observed values.
struct Level {
  std::string label;
  std::vector<double> values;  // n_i >= 1

  bool operator==(const Level&) const = default;
};

// Grouped observations over ordered levels.  Level order is semantic:
// index i is the i-th level of the explanatory variable.
struct ObservationTable {
  std::vector<Level> levels;

  int level_count() const { return static_cast<int>(levels.size()); }
  std::int64_t observation_count() const;
  double level_sum(int i) const;
  double level_mean(int i) const;
  double total_sum() const;
  double grand_mean() const;

  // Same data with the level order flipped.
  ObservationTable reversed() const;

  bool operator==(const ObservationTable&) const = default;
};

// Throws StructuralError unless the table has at least one level and
// every level has at least one observation.
void check_shape(const ObservationTable& table);

}  // namespace monofit
