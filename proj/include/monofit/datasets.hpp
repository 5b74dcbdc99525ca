#pragma once

#include <span>

#include "monofit/io.hpp"
#include "monofit/table.hpp"

namespace monofit::datasets {

// Course no-show counts by SAT reading score: 35 levels, 152 students,
// 26 no-shows.  Ships with the repository as data/sat_noshow.csv.
std::span<const AggregateRecord> sat_noshow_records();
ObservationTable sat_noshow();

}  // namespace monofit::datasets
