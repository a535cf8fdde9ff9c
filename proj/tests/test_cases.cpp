#include "doctest.h"

#include "gcsa/analysis.hpp"
#include "gcsa/cases.hpp"
#include "oracles.hpp"

using namespace gcsa;

namespace {

Eigen::MatrixXd fd_of(const ParametricModel& pm, double h = 1e-6) {
  const Eigen::VectorXd x = pm.variables;
  const Eigen::Index rows = pm.residuals(x).size();
  Eigen::MatrixXd j(rows, x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd a = x, b = x;
    a(k) += h;
    b(k) -= h;
    j.col(k) = (pm.residuals(a) - pm.residuals(b)) / (2 * h);
  }
  return j;
}

}  // namespace

TEST_CASE("case registry") {
  for (const auto& name : case_names()) CHECK(load_case(name).name == name);
  CHECK_THROWS_AS(load_case("nope"), ModelError);
}

TEST_CASE("equation counts") {
  CHECK(hexahedron_case().expected.listed_equation_count == 16);
  CHECK(hexahedron_case().expected.equation_count == 22);
  CHECK(slot_case().expected.equation_count == 19);
  CHECK(bracket_case().expected.equation_count == 97);
}

TEST_CASE("bracket construction satisfies everything but C14") {
  const auto fx = bracket_case();
  CHECK(fx.model.entities().size() == 30);
  CHECK(fx.model.constraints().size() == 40);
  const auto w = validate_witness(fx.model);
  CHECK(w.violated == std::vector<std::string>{"C14"});
  CHECK_FALSE(fx.available);
  CHECK(fx.unavailable_reason.find("C14") != std::string::npos);
}

TEST_CASE("plane example, tuple scheme") {
  const auto pm = plane_example_parametric(PlaneScheme::Tuple);
  CHECK(pm.variables.size() == 18);
  CHECK(pm.aux_count == 2);
  CHECK(pm.equation_count == 13);
  CHECK(pm.residuals(pm.variables).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(testing::relative_error(pm.jacobian(pm.variables), fd_of(pm)) < 1e-6);
  CHECK(testing::svd_rank(pm.jacobian(pm.variables)) == 13);
  CHECK(witness_parametric_dof(pm) == 5);
}

TEST_CASE("plane example, standard scheme witness mode") {
  const auto pm = plane_example_parametric(PlaneScheme::Standard);
  CHECK(pm.variables.size() == 26);
  CHECK(pm.aux_count == 2);
  CHECK(pm.equation_count == 13);
  CHECK(pm.residuals(pm.variables).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(testing::relative_error(pm.jacobian(pm.variables), fd_of(pm)) < 1e-6);
  // Five true DOF plus two in-plane slides of each plane's reference point.
  CHECK(witness_parametric_dof(pm) == 13);
}

TEST_CASE("standard parametric form of other models") {
  const auto line = standard_parametric(line_example().model);
  CHECK(line.variables.size() == 12);
  CHECK(testing::relative_error(line.jacobian(line.variables), fd_of(line)) < 1e-6);
  // Each line keeps one slide along its axis: 12 - (1 + 2 unit rows) = 9.
  CHECK(witness_parametric_dof(line) == 9);

  const auto hex = standard_parametric(hexahedron_case().model);
  CHECK(hex.variables.size() == 6 * 6 + 2 * 3 + 3);
  CHECK(testing::relative_error(hex.jacobian(hex.variables), fd_of(hex)) < 1e-6);
}

TEST_CASE("zero equations: DOF is the variable count") {
  const auto pm = standard_parametric(single_plane_case().model);
  CHECK(pm.equation_count == 1);
  ParametricModel empty;
  empty.name = "empty";
  empty.variables = Eigen::VectorXd::Zero(4);
  empty.residuals = [](const Eigen::VectorXd&) { return Eigen::VectorXd(0); };
  empty.jacobian = [](const Eigen::VectorXd& x) { return Eigen::MatrixXd(0, x.size()); };
  CHECK(witness_parametric_dof(empty) == 4);
}

TEST_CASE("parametric DOF refuses a non-witness") {
  auto pm = plane_example_parametric(PlaneScheme::Tuple);
  pm.variables(3) += 0.5;
  CHECK_THROWS_AS(witness_parametric_dof(pm), AnalysisError);
}
