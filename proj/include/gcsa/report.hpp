#pragma once

// Analysis reports: machine-readable JSON, a plain-text summary, process exit
// codes and a Graphviz view of the decomposition.

#include "gcsa/analysis.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace gcsa {

struct ReportBridge {
  std::string constraint;
  /// Indices into ReportFile::rigid_parts.
  std::vector<std::size_t> parts;

  bool operator==(const ReportBridge&) const = default;
};

/// Serializable view of an AnalysisReport. Ids inside every group and part
/// are in natural order (F2 before F10), and the group and part lists are
/// sorted the same way, so output is byte-stable.
struct ReportFile {
  bool well = false;
  bool under = false;
  bool over_consistent = false;
  bool inconsistent = false;
  long dflx = 0;
  std::size_t rank_g = 0;
  std::size_t rank_b = 0;
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::vector<std::vector<std::string>> dependency_groups;
  std::vector<std::vector<std::string>> rigid_parts;
  std::vector<ReportBridge> bridging;
  double tolerance = kDefaultTolerance;
  double witness_residual_max = 0.0;
  std::vector<std::string> violated;

  bool operator==(const ReportFile&) const = default;
};

/// a < b comparing digit runs by value: "F2" < "F10".
bool natural_less(const std::string& a, const std::string& b);

ReportFile make_report(const AnalysisReport& analysis);

std::string report_to_json(const ReportFile& report);
/// Throws ParseError on malformed input.
ReportFile report_from_json(const std::string& text);

/// 0 well, 2 under, 3 over, 4 under and over, 1 invalid witness.
int exit_code(const ReportFile& report);

/// Human-readable summary: state, DFLX, groups, parts, bridging constraints.
std::string summary_text(const ReportFile& report);

/// Digraph with one cluster per rigid part and one edge per constraint,
/// labelled with its id. Edges between clusters carry class="bridging";
/// constraints of a dependency group share a colour.
std::string emit_dot(const ReportFile& report, const VariationalModel& model);

}  // namespace gcsa
