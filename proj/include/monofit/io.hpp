#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "monofit/families.hpp"
#include "monofit/monotone_fit.hpp"
#include "monofit/simulation.hpp"
#include "monofit/table.hpp"

namespace monofit {

// One aggregate input row: a level holding `total` 0/1 observations of
// which `successes` are ones.
struct AggregateRecord {
  std::string label;
  std::int64_t total = 0;
  std::int64_t successes = 0;

  bool operator==(const AggregateRecord&) const = default;
};

enum class TableFormat { Aggregate, Long };

// Comma-delimited UTF-8 rows.  Aggregate rows are `level,total,successes`
// (totals expand to 0/1 lists, ones first); long rows are `level,value`
// with consecutive equal labels forming one level.  Either format may
// carry an extra leading numeric `order` column, in which case rows are
// sorted by it before levels are formed.  A header row is skipped when
// the numeric-required fields of the first row do not parse as numbers.
// Without an order column, all-numeric labels must be non-decreasing and
// a repeated non-adjacent label is an error.
ObservationTable parse_table(std::istream& in, TableFormat format);
ObservationTable load_table(const std::string& path, TableFormat format);

// Long-format serialization; parse_table(emit_table_long(t), Long)
// reproduces t exactly.
void emit_table_long(std::ostream& out, const ObservationTable& table);

enum class FitEmit { Blocks, Phi, PlotData };

struct FitReportOptions {
  FitEmit emit = FitEmit::Blocks;
  bool json = false;
  std::optional<FamilySpec> family;  // adds a log-likelihood line when present
};

// Writes the fitted estimate: per block the level-label range, total
// count, aggregate sum and block value; plus grand totals.  PlotData
// emits per-level rows `label,observed,fitted` for external plotting.
// Floating values carry 17 significant digits plus a rounded display
// column; field order is stable for byte-exact comparison.
void emit_fit(std::ostream& out, const MonotoneEstimate& estimate,
              const ObservationTable& table, const FitReportOptions& options = {});

struct ReportMeta {
  std::string statistic;
  std::string hypothesis;
  std::string family;
  bool json = false;
};

// Writes a simulation report.  Output depends only on the report and
// meta fields, never on execution parallelism.
void emit_report(std::ostream& out, const SimulationReport& report,
                 const ReportMeta& meta);

}  // namespace monofit
