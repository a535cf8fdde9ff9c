#include "cli.hpp"

#include "gcsa/analysis.hpp"
#include "gcsa/cases.hpp"
#include "gcsa/model_io.hpp"
#include "gcsa/report.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>

namespace gcsa {

namespace {

std::optional<double> env_tolerance() {
  const char* raw = std::getenv("GCSA_TOL");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0.0)) throw ModelError(std::string("GCSA_TOL is not a positive number: ") + raw);
  return v;
}

VariationalModel with_tolerance(const VariationalModel& model, double tol) {
  return build_model(model.entities(), model.constraints(), tol);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ModelError("cannot write '" + path + "'");
}

struct AnalyzeArgs {
  std::string file;
  std::string case_name;
  std::optional<double> tol;
  std::string report_path;
  std::string dot_path;
};

int analyze(const AnalyzeArgs& a, std::ostream& out) {
  if (a.file.empty() == a.case_name.empty()) throw ModelError("analyze takes a model file or --case, not both");

  // --tol beats GCSA_TOL, which beats the file's own "tolerance" key.
  std::optional<double> override_tol = a.tol ? a.tol : env_tolerance();
  if (override_tol && !(*override_tol > 0.0)) throw ModelError("--tol must be positive");

  VariationalModel model = a.case_name.empty() ? load_model(a.file) : load_case(a.case_name).model;
  if (override_tol) model = with_tolerance(model, *override_tol);

  const AnalysisReport analysis = analyze(model);
  const ReportFile report = make_report(analysis);
  out << summary_text(report);
  if (!a.report_path.empty()) write_file(a.report_path, report_to_json(report));
  if (!a.dot_path.empty()) write_file(a.dot_path, emit_dot(report, model));
  return exit_code(report);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constrained-state analysis of variational CAD models", "gcsa"};
  app.require_subcommand(1);

  AnalyzeArgs a;
  auto* cmd_analyze = app.add_subcommand("analyze", "Classify a model and decompose it");
  cmd_analyze->add_option("model", a.file, "Model file (JSON)");
  cmd_analyze->add_option("--case", a.case_name, "Analyze a built-in case instead of a file");
  cmd_analyze->add_option("--tol", a.tol, "Nullity tolerance (default 1e-7, or GCSA_TOL)");
  cmd_analyze->add_option("--report", a.report_path, "Write the JSON report here");
  cmd_analyze->add_option("--dot", a.dot_path, "Write a Graphviz view here");

  auto* cmd_list = app.add_subcommand("list-cases", "List built-in cases");

  std::string export_name, export_path;
  auto* cmd_export = app.add_subcommand("export-case", "Write a built-in case as a model file");
  cmd_export->add_option("name", export_name, "Case name")->required();
  cmd_export->add_option("-o,--output", export_path, "Output path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_list->parsed()) {
      for (const auto& name : case_names()) out << name << "\n";
      return 0;
    }
    if (cmd_export->parsed()) {
      const std::string text = serialize_model(load_case(export_name).model);
      if (export_path.empty()) {
        out << text;
      } else {
        write_file(export_path, text);
      }
      return 0;
    }
    return analyze(a, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gcsa
