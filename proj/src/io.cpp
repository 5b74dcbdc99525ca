#include "monofit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "monofit/errors.hpp"

namespace monofit {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt4(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4f", x);
  return buf;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

bool parse_number(const std::string& field, double& out) {
  if (field.empty()) return false;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

struct ParsedRow {
  std::size_t line_no;
  std::vector<std::string> fields;
};

std::int64_t parse_count_field(const ParsedRow& row, std::size_t column, const char* what) {
  double value = 0.0;
  if (!parse_number(row.fields[column], value) || !std::isfinite(value) ||
      std::fabs(value - std::round(value)) > 1e-9)
    throw ValidationError("line " + std::to_string(row.line_no) + ": " + what + " '" +
                          row.fields[column] + "' is not an integer");
  return static_cast<std::int64_t>(std::llround(value));
}

}  // namespace

ObservationTable parse_table(std::istream& in, TableFormat format) {
  std::vector<ParsedRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    rows.push_back({line_no, split_row(line)});
  }
  if (rows.empty()) throw StructuralError("input has no rows");

  const std::size_t base_columns = format == TableFormat::Aggregate ? 3 : 2;
  const std::size_t columns = rows.front().fields.size();
  if (columns != base_columns && columns != base_columns + 1)
    throw ValidationError("line " + std::to_string(rows.front().line_no) + ": expected " +
                          std::to_string(base_columns) + " or " +
                          std::to_string(base_columns + 1) + " columns, got " +
                          std::to_string(columns));
  const bool has_order = columns == base_columns + 1;
  const std::size_t label_col = has_order ? 1 : 0;

  for (const auto& row : rows)
    if (row.fields.size() != columns)
      throw ValidationError("line " + std::to_string(row.line_no) + ": expected " +
                            std::to_string(columns) + " columns, got " +
                            std::to_string(row.fields.size()));

  // Header row: every numeric-required field of the first row fails to
  // parse as a number.
  {
    bool any_numeric = false;
    double ignored = 0.0;
    for (std::size_t c = 0; c < columns; ++c) {
      if (c == label_col) continue;
      if (parse_number(rows.front().fields[c], ignored)) any_numeric = true;
    }
    if (!any_numeric) rows.erase(rows.begin());
  }
  if (rows.empty()) throw StructuralError("input has a header but no data rows");

  if (has_order) {
    std::vector<std::pair<double, std::size_t>> keys;
    keys.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double order = 0.0;
      if (!parse_number(rows[i].fields[0], order))
        throw ValidationError("line " + std::to_string(rows[i].line_no) + ": order value '" +
                              rows[i].fields[0] + "' is not a number");
      keys.emplace_back(order, i);
    }
    std::stable_sort(keys.begin(), keys.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<ParsedRow> sorted;
    sorted.reserve(rows.size());
    for (const auto& [order, i] : keys) sorted.push_back(std::move(rows[i]));
    rows = std::move(sorted);
  }

  ObservationTable table;
  if (format == TableFormat::Aggregate) {
    for (const auto& row : rows) {
      const std::string& label = row.fields[label_col];
      const std::int64_t total = parse_count_field(row, label_col + 1, "total");
      const std::int64_t successes = parse_count_field(row, label_col + 2, "successes");
      if (total < 1)
        throw ValidationError("line " + std::to_string(row.line_no) +
                              ": total must be >= 1");
      if (successes < 0 || successes > total)
        throw ValidationError("line " + std::to_string(row.line_no) + ": successes " +
                              std::to_string(successes) + " outside [0, " +
                              std::to_string(total) + "]");
      Level level;
      level.label = label;
      level.values.assign(static_cast<std::size_t>(successes), 1.0);
      level.values.resize(static_cast<std::size_t>(total), 0.0);
      table.levels.push_back(std::move(level));
    }
  } else {
    for (const auto& row : rows) {
      const std::string& label = row.fields[label_col];
      double value = 0.0;
      if (!parse_number(row.fields[label_col + 1], value))
        throw ValidationError("line " + std::to_string(row.line_no) + ": value '" +
                              row.fields[label_col + 1] + "' is not a number");
      if (!table.levels.empty() && table.levels.back().label == label)
        table.levels.back().values.push_back(value);
      else
        table.levels.push_back({label, {value}});
    }
  }

  // Level labels must be pairwise distinct; without an order column,
  // all-numeric labels must additionally appear in increasing order.
  {
    std::set<std::string> seen;
    for (const auto& level : table.levels)
      if (!seen.insert(level.label).second)
        throw ValidationError("duplicate level '" + level.label + "'");
  }
  if (!has_order) {
    std::vector<double> numeric_labels;
    bool all_numeric = true;
    for (const auto& level : table.levels) {
      double v = 0.0;
      if (!parse_number(level.label, v)) {
        all_numeric = false;
        break;
      }
      numeric_labels.push_back(v);
    }
    if (all_numeric) {
      for (std::size_t i = 1; i < numeric_labels.size(); ++i)
        if (numeric_labels[i] <= numeric_labels[i - 1])
          throw ValidationError("levels out of order: '" + table.levels[i - 1].label +
                                "' before '" + table.levels[i].label +
                                "' (sort the input or add an order column)");
    }
  }

  check_shape(table);
  return table;
}

ObservationTable load_table(const std::string& path, TableFormat format) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return parse_table(in, format);
}

void emit_table_long(std::ostream& out, const ObservationTable& table) {
  for (const auto& level : table.levels)
    for (double x : level.values) out << level.label << ',' << fmt17(x) << '\n';
}

namespace {

std::string block_label_range(const ObservationTable& table, const FittedBlock& block) {
  const std::string& first = table.levels[static_cast<std::size_t>(block.first)].label;
  const std::string& last = table.levels[static_cast<std::size_t>(block.last)].label;
  return block.first == block.last ? first : first + ".." + last;
}

const char* direction_name(Direction direction) {
  return direction == Direction::NonDecreasing ? "nondecreasing" : "nonincreasing";
}

void emit_fit_json(std::ostream& out, const MonotoneEstimate& estimate,
                   const ObservationTable& table, const FitReportOptions& options) {
  nlohmann::ordered_json doc;
  doc["direction"] = direction_name(estimate.direction);
  doc["blocks"] = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < estimate.blocks.size(); ++r) {
    const FittedBlock& block = estimate.blocks[r];
    nlohmann::ordered_json item;
    item["index"] = r + 1;
    item["first_label"] = table.levels[static_cast<std::size_t>(block.first)].label;
    item["last_label"] = table.levels[static_cast<std::size_t>(block.last)].label;
    item["first_level"] = block.first + 1;
    item["last_level"] = block.last + 1;
    item["count"] = block.count;
    item["sum"] = block.sum;
    item["tau"] = block.tau;
    doc["blocks"].push_back(std::move(item));
  }
  doc["phi"] = estimate.phi();
  if (options.family)
    doc["loglik"] = log_likelihood(*options.family, estimate.phi(), table);
  else
    doc["loglik"] = nullptr;
  out << doc.dump() << '\n';
}

}  // namespace

void emit_fit(std::ostream& out, const MonotoneEstimate& estimate,
              const ObservationTable& table, const FitReportOptions& options) {
  check_shape(table);
  if (estimate.blocks.empty() || estimate.level_count() != table.level_count())
    throw StructuralError("estimate does not match the table (" +
                          std::to_string(estimate.level_count()) + " vs " +
                          std::to_string(table.level_count()) + " levels)");

  if (options.json) {
    emit_fit_json(out, estimate, table, options);
    return;
  }

  const std::vector<double> phi = estimate.phi();
  switch (options.emit) {
    case FitEmit::Blocks: {
      out << "direction=" << direction_name(estimate.direction)
          << " levels=" << table.level_count() << " blocks=" << estimate.blocks.size()
          << '\n';
      for (std::size_t r = 0; r < estimate.blocks.size(); ++r) {
        const FittedBlock& block = estimate.blocks[r];
        out << "block=" << r + 1 << " levels=" << block_label_range(table, block)
            << " count=" << block.count << " sum=" << fmt17(block.sum)
            << " tau=" << fmt17(block.tau) << " tau_rounded=" << fmt4(block.tau) << '\n';
      }
      out << "total count=" << table.observation_count() << " sum=" << fmt17(table.total_sum())
          << " mean=" << fmt17(table.grand_mean())
          << " mean_rounded=" << fmt4(table.grand_mean()) << '\n';
      break;
    }
    case FitEmit::Phi: {
      out << "direction=" << direction_name(estimate.direction)
          << " levels=" << table.level_count() << '\n';
      for (int i = 0; i < table.level_count(); ++i)
        out << "level=" << table.levels[static_cast<std::size_t>(i)].label
            << " phi=" << fmt17(phi[static_cast<std::size_t>(i)])
            << " phi_rounded=" << fmt4(phi[static_cast<std::size_t>(i)]) << '\n';
      break;
    }
    case FitEmit::PlotData: {
      out << "label,observed,fitted\n";
      for (int i = 0; i < table.level_count(); ++i)
        out << table.levels[static_cast<std::size_t>(i)].label << ','
            << fmt17(table.level_mean(i)) << ',' << fmt17(phi[static_cast<std::size_t>(i)])
            << '\n';
      break;
    }
  }
  if (options.family && options.emit != FitEmit::PlotData)
    out << "loglik=" << fmt17(log_likelihood(*options.family, phi, table))
        << " family=" << options.family->name() << '\n';
}

void emit_report(std::ostream& out, const SimulationReport& report, const ReportMeta& meta) {
  double stat_min = report.statistics.empty() ? 0.0 : report.statistics.front();
  double stat_max = stat_min;
  double stat_sum = 0.0;
  for (double value : report.statistics) {
    stat_min = std::min(stat_min, value);
    stat_max = std::max(stat_max, value);
    stat_sum += value;
  }
  const double stat_mean = stat_sum / static_cast<double>(report.replicate_count);

  if (meta.json) {
    nlohmann::ordered_json doc;
    if (!meta.statistic.empty()) doc["statistic"] = meta.statistic;
    if (!meta.hypothesis.empty()) doc["hypothesis"] = meta.hypothesis;
    if (!meta.family.empty()) doc["family"] = meta.family;
    doc["replicates"] = report.replicate_count;
    doc["seed"] = report.master_seed;
    doc["observed"] = report.observed;
    doc["count_below"] = report.count_below;
    doc["count_at_or_above"] = report.count_at_or_above;
    doc["quantile_rank"] = report.quantile_rank;
    doc["replicate_mean"] = stat_mean;
    doc["replicate_min"] = stat_min;
    doc["replicate_max"] = stat_max;
    out << doc.dump() << '\n';
    return;
  }

  out << "simulate";
  if (!meta.statistic.empty()) out << " statistic=" << meta.statistic;
  if (!meta.hypothesis.empty()) out << " hypothesis=" << meta.hypothesis;
  if (!meta.family.empty()) out << " family=" << meta.family;
  char seed_buf[24];
  std::snprintf(seed_buf, sizeof(seed_buf), "%" PRIu64, report.master_seed);
  out << " replicates=" << report.replicate_count << " seed=" << seed_buf << '\n';
  out << "observed=" << fmt17(report.observed)
      << " observed_rounded=" << fmt4(report.observed) << '\n';
  out << "count_below=" << report.count_below
      << " count_at_or_above=" << report.count_at_or_above << '\n';
  out << "quantile_rank=" << fmt17(report.quantile_rank)
      << " rank_rounded=" << fmt4(report.quantile_rank) << '\n';
  out << "replicate_mean=" << fmt17(stat_mean) << " replicate_min=" << fmt17(stat_min)
      << " replicate_max=" << fmt17(stat_max) << '\n';
}

}  // namespace monofit
