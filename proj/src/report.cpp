#include "gcsa/report.hpp"

#include "gcsa/model_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <sstream>

namespace gcsa {

namespace {

using nlohmann::ordered_json;

bool natural_less_vec(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), natural_less);
}

std::string join(const std::vector<std::string>& ids, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += sep;
    out += ids[i];
  }
  return out;
}

std::string state_label(const ReportFile& r) {
  if (r.inconsistent) return "inconsistent (invalid witness)";
  if (r.under && r.over_consistent) return "under- and over-constrained";
  if (r.under) return "under-constrained";
  if (r.over_consistent) return "over-constrained";
  return "well-constrained";
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

constexpr std::array<const char*, 8> kGroupColours{"red",    "blue",  "darkgreen", "orange",
                                                   "purple", "brown", "magenta",   "cyan4"};

}  // namespace

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      std::size_t ei = i, ej = j;
      while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
      while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
      // Compare digit runs by value: strip leading zeros, then length, then text.
      std::size_t si = i, sj = j;
      while (si + 1 < ei && a[si] == '0') ++si;
      while (sj + 1 < ej && b[sj] == '0') ++sj;
      if (ei - si != ej - sj) return ei - si < ej - sj;
      const int cmp = a.compare(si, ei - si, b, sj, ej - sj);
      if (cmp != 0) return cmp < 0;
      if (ei - i != ej - j) return ei - i < ej - j;
      i = ei;
      j = ej;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

ReportFile make_report(const AnalysisReport& analysis) {
  ReportFile r;
  const auto& s = analysis.state;
  r.well = s.well;
  r.under = s.under;
  r.over_consistent = s.over_consistent;
  r.inconsistent = s.inconsistent;
  r.dflx = s.dflx;
  r.rank_g = s.rank_g;
  r.rank_b = s.rank_b;
  r.rows = s.rows;
  r.columns = s.columns;
  r.tolerance = analysis.tolerance;
  r.witness_residual_max = analysis.witness.max_abs_residual;
  r.violated = analysis.witness.violated;

  for (const auto& g : analysis.groups) {
    auto ids = g.constraints;
    std::sort(ids.begin(), ids.end(), natural_less);
    r.dependency_groups.push_back(std::move(ids));
  }
  std::sort(r.dependency_groups.begin(), r.dependency_groups.end(), natural_less_vec);

  if (analysis.partition) {
    const auto& parts = analysis.partition->parts;
    std::vector<std::size_t> order(parts.size());
    std::vector<std::vector<std::string>> sorted_parts;
    for (const auto& p : parts) {
      auto ids = p;
      std::sort(ids.begin(), ids.end(), natural_less);
      sorted_parts.push_back(std::move(ids));
    }
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return natural_less_vec(sorted_parts[a], sorted_parts[b]); });
    std::vector<std::size_t> new_index(parts.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      new_index[order[k]] = k;
      r.rigid_parts.push_back(sorted_parts[order[k]]);
    }
    for (const auto& b : analysis.partition->bridging) {
      ReportBridge rb{b.constraint, {}};
      for (std::size_t p : b.parts) rb.parts.push_back(new_index[p]);
      std::sort(rb.parts.begin(), rb.parts.end());
      r.bridging.push_back(std::move(rb));
    }
    std::sort(r.bridging.begin(), r.bridging.end(),
              [](const ReportBridge& a, const ReportBridge& b) { return natural_less(a.constraint, b.constraint); });
  }
  return r;
}

std::string report_to_json(const ReportFile& r) {
  ordered_json doc;
  doc["state"] = {{"well", r.well},
                  {"under", r.under},
                  {"over_consistent", r.over_consistent},
                  {"inconsistent", r.inconsistent}};
  doc["dflx"] = r.dflx;
  doc["rank_G"] = r.rank_g;
  doc["rank_B"] = r.rank_b;
  doc["rows"] = r.rows;
  doc["columns"] = r.columns;
  doc["dependency_groups"] = r.dependency_groups;
  doc["rigid_parts"] = r.rigid_parts;
  doc["bridging"] = ordered_json::array();
  for (const auto& b : r.bridging) doc["bridging"].push_back({{"constraint", b.constraint}, {"parts", b.parts}});
  doc["tolerance"] = r.tolerance;
  doc["witness_residual_max"] = r.witness_residual_max;
  doc["violated"] = r.violated;
  return doc.dump(2) + "\n";
}

ReportFile report_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    ReportFile r;
    const auto& st = doc.at("state");
    r.well = st.at("well").get<bool>();
    r.under = st.at("under").get<bool>();
    r.over_consistent = st.at("over_consistent").get<bool>();
    r.inconsistent = st.at("inconsistent").get<bool>();
    r.dflx = doc.at("dflx").get<long>();
    r.rank_g = doc.at("rank_G").get<std::size_t>();
    r.rank_b = doc.at("rank_B").get<std::size_t>();
    r.rows = doc.at("rows").get<std::size_t>();
    r.columns = doc.at("columns").get<std::size_t>();
    r.dependency_groups = doc.at("dependency_groups").get<std::vector<std::vector<std::string>>>();
    r.rigid_parts = doc.at("rigid_parts").get<std::vector<std::vector<std::string>>>();
    for (const auto& b : doc.at("bridging")) {
      r.bridging.push_back({b.at("constraint").get<std::string>(), b.at("parts").get<std::vector<std::size_t>>()});
    }
    r.tolerance = doc.at("tolerance").get<double>();
    r.witness_residual_max = doc.at("witness_residual_max").get<double>();
    r.violated = doc.at("violated").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& err) {
    throw ParseError(std::string("malformed report: ") + err.what());
  }
}

int exit_code(const ReportFile& r) {
  if (r.inconsistent) return 1;
  if (r.under && r.over_consistent) return 4;
  if (r.over_consistent) return 3;
  if (r.under) return 2;
  return 0;
}

std::string summary_text(const ReportFile& r) {
  std::ostringstream out;
  out << "state: " << state_label(r) << "\n";
  if (r.inconsistent) {
    out << "witness residual: " << r.witness_residual_max << "\n";
    out << "violated: " << join(r.violated) << "\n";
    return out.str();
  }
  out << "DFLX: " << r.dflx << "\n";
  out << "rank G: " << r.rank_g << " of " << r.rows << " rows, " << r.columns << " columns; rank B: " << r.rank_b
      << "\n";
  out << "tolerance: " << r.tolerance << "\n";
  out << "dependency groups:";
  if (r.dependency_groups.empty()) out << " none";
  out << "\n";
  for (const auto& g : r.dependency_groups) out << "  {" << join(g) << "}\n";
  out << "rigid parts:\n";
  for (std::size_t i = 0; i < r.rigid_parts.size(); ++i) {
    out << "  P" << i + 1 << ": " << join(r.rigid_parts[i]) << "\n";
  }
  out << "bridging constraints:";
  if (r.bridging.empty()) out << " none";
  out << "\n";
  for (const auto& b : r.bridging) {
    out << "  " << b.constraint << " (";
    for (std::size_t k = 0; k < b.parts.size(); ++k) out << (k ? ", " : "") << "P" << b.parts[k] + 1;
    out << ")\n";
  }
  return out.str();
}

std::string emit_dot(const ReportFile& r, const VariationalModel& model) {
  std::map<std::string, std::size_t> part_of;
  for (std::size_t p = 0; p < r.rigid_parts.size(); ++p) {
    for (const auto& id : r.rigid_parts[p]) part_of[id] = p;
  }
  std::map<std::string, std::size_t> group_of;
  for (std::size_t g = 0; g < r.dependency_groups.size(); ++g) {
    for (const auto& id : r.dependency_groups[g]) group_of.emplace(id, g);
  }

  std::ostringstream out;
  out << "digraph gcsa {\n";
  out << "  node [shape=box];\n";
  for (std::size_t p = 0; p < r.rigid_parts.size(); ++p) {
    out << "  subgraph cluster_P" << p + 1 << " {\n";
    out << "    label=\"P" << p + 1 << "\";\n";
    for (const auto& id : r.rigid_parts[p]) out << "    " << quoted(id) << ";\n";
    out << "  }\n";
  }
  for (const auto& e : model.entities()) {
    if (!part_of.count(e.id)) out << "  " << quoted(e.id) << ";\n";
  }

  for (const auto& c : model.constraints()) {
    const auto& refs = c.entity_refs;
    for (std::size_t k = 1; k < refs.size(); ++k) {
      out << "  " << quoted(refs[0]) << " -> " << quoted(refs[k]) << " [label=" << quoted(c.id);
      auto pa = part_of.find(refs[0]);
      auto pb = part_of.find(refs[k]);
      if (pa != part_of.end() && pb != part_of.end() && pa->second != pb->second) {
        out << ", class=\"bridging\", style=bold";
      }
      if (auto g = group_of.find(c.id); g != group_of.end()) {
        out << ", color=" << kGroupColours[g->second % kGroupColours.size()];
      }
      out << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace gcsa
