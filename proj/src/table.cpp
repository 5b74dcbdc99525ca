#include "monofit/table.hpp"

#include <algorithm>
#include <numeric>

#include "monofit/errors.hpp"

namespace monofit {

std::int64_t ObservationTable::observation_count() const {
  std::int64_t n = 0;
  for (const auto& level : levels) n += static_cast<std::int64_t>(level.values.size());
  return n;
}

double ObservationTable::level_sum(int i) const {
  const auto& v = levels[static_cast<std::size_t>(i)].values;
  return std::accumulate(v.begin(), v.end(), 0.0);
}

double ObservationTable::level_mean(int i) const {
  const auto& v = levels[static_cast<std::size_t>(i)].values;
  return level_sum(i) / static_cast<double>(v.size());
}

double ObservationTable::total_sum() const {
  double s = 0.0;
  for (int i = 0; i < level_count(); ++i) s += level_sum(i);
  return s;
}

double ObservationTable::grand_mean() const {
  return total_sum() / static_cast<double>(observation_count());
}

ObservationTable ObservationTable::reversed() const {
  ObservationTable out = *this;
  std::reverse(out.levels.begin(), out.levels.end());
  return out;
}

void check_shape(const ObservationTable& table) {
  if (table.levels.empty()) throw StructuralError("table has no levels");
  for (int i = 0; i < table.level_count(); ++i) {
    if (table.levels[static_cast<std::size_t>(i)].values.empty())
      throw StructuralError("level " + std::to_string(i + 1) + " (" +
                            table.levels[static_cast<std::size_t>(i)].label +
                            ") has no observations");
  }
}

}  // namespace monofit
