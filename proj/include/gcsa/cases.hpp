#pragma once

// Built-in models with constructed witness geometry, and parametric
// (witness-method) formulations of the comparison examples.

#include "gcsa/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gcsa {

struct CaseExpectation {
  std::optional<bool> well;
  std::optional<bool> under;
  std::optional<bool> over;
  std::optional<long> dflx;
  std::optional<std::size_t> kernel_dim;
  std::optional<std::size_t> rank_b;
  /// Constraint-id sets (each sorted), order-free.
  std::optional<std::vector<std::vector<std::string>>> groups;
  /// Entity-id sets (each sorted), order-free.
  std::optional<std::vector<std::vector<std::string>>> partition;
  std::optional<std::size_t> bridging_count;
  std::size_t equation_count = 0;
  /// Equations of the named constraints only, excluding helper incidences.
  std::size_t listed_equation_count = 0;
  std::vector<std::string> notes;
};

struct CaseFixture {
  std::string name;
  VariationalModel model;
  CaseExpectation expected;
  /// Whether the constructed geometry satisfies every constraint.
  bool available = true;
  std::string unavailable_reason;
};

/// Six planes of a unit cube after the angle-to-parallel edit, plus the two
/// endpoints of edge E1 pinned by point-on-plane incidences.
CaseFixture hexahedron_case();

/// Eight planes of the slotted block after the push-pull edit; F7 is left
/// unconstrained.
CaseFixture slot_case();

/// Thirty-face bracket with the forty printed constraints. The printed
/// table asks for F2 and F3 to be both 10 apart (C1) and perpendicular
/// (C14); the geometry satisfies every other constraint, so the fixture is
/// reported unavailable.
CaseFixture bracket_case();

/// Four planes of a rectangular through hole: Dis(F1,F3), Dis(F2,F4),
/// Per(F1,F2).
CaseFixture plane_example();

/// Two skew lines with a single distance constraint.
CaseFixture line_example();

/// One unconstrained plane.
CaseFixture single_plane_case();

std::vector<std::string> case_names();
/// Throws ModelError for an unknown name.
CaseFixture load_case(const std::string& name);

/// Raw-variable formulation for witness-method comparisons: F(x) and J(x)
/// over a flat variable vector (aux scalars included).
struct ParametricModel {
  std::string name;
  Eigen::VectorXd variables;
  std::size_t aux_count = 0;
  std::size_t equation_count = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residuals;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
};

enum class PlaneScheme {
  /// (a, b, c, d) with a^2 + b^2 + c^2 = 1.
  Tuple,
  /// Point and unit normal, with n.n = 1 rows.
  Standard,
};

/// Plane example in the requested representation.
ParametricModel plane_example_parametric(PlaneScheme scheme);

/// Any model in the point/orientation scheme: variables are (p, n) per entity
/// (p only for points and spheres) then aux scalars; equations are the
/// catalog's plus one unit-norm row per oriented entity.
ParametricModel standard_parametric(const VariationalModel& model);

/// Variable count minus rank(J) at the stored variables, tolerance 1e-7.
/// Throws AnalysisError if the residuals exceed 1e-9.
std::size_t witness_parametric_dof(const ParametricModel& model, double tol = kDefaultTolerance);

}  // namespace gcsa
