#include "monofit/datasets.hpp"

#include <array>

namespace monofit::datasets {

namespace {

// No-show counts by SAT reading score level: label, students, no-shows.
constexpr int kSatNoShowCount = 35;
const std::array<AggregateRecord, kSatNoShowCount> kSatNoShow = {{
    {"330", 1, 0},  {"390", 2, 0},  {"400", 1, 0},  {"410", 2, 0},  {"420", 5, 0},
    {"430", 4, 0},  {"440", 4, 1},  {"450", 3, 2},  {"460", 2, 0},  {"470", 8, 1},
    {"480", 11, 3}, {"490", 9, 0},  {"500", 4, 1},  {"510", 11, 0}, {"520", 9, 0},
    {"530", 8, 1},  {"540", 11, 4}, {"550", 6, 1},  {"560", 5, 0},  {"570", 6, 0},
    {"580", 7, 0},  {"590", 5, 1},  {"600", 3, 1},  {"610", 5, 3},  {"620", 4, 2},
    {"630", 1, 0},  {"640", 7, 2},  {"650", 1, 0},  {"660", 1, 0},  {"680", 1, 1},
    {"690", 1, 1},  {"700", 1, 0},  {"710", 1, 0},  {"750", 1, 0},  {"800", 1, 1},
}};

}  // namespace

std::span<const AggregateRecord> sat_noshow_records() {
  return {kSatNoShow.data(), kSatNoShow.size()};
}

ObservationTable sat_noshow() {
  ObservationTable table;
  table.levels.reserve(kSatNoShow.size());
  for (const auto& record : kSatNoShow) {
    Level level;
    level.label = record.label;
    level.values.assign(static_cast<std::size_t>(record.successes), 1.0);
    level.values.resize(static_cast<std::size_t>(record.total), 0.0);
    table.levels.push_back(std::move(level));
  }
  return table;
}

}  // namespace monofit::datasets
