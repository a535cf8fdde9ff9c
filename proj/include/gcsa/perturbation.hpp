#pragma once

// Geometric perturbation: the parametric-to-screw transform T, the
// perturbation matrix G = J T, and the basis B of rigid-body and
// geometry-invariant motions.
//
// Screw coordinates of one entity are (dt, dr) about the global origin:
//   dp = dr x p + dt,   dn = dr x n.

#include "gcsa/constraints.hpp"
#include "gcsa/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gcsa {

/// [[I, -P], [0, -N]] with P = skew(p), N = skew(n). N is zero for points
/// and spheres.
Eigen::Matrix<double, 6, 6> entity_transform(const GeometricEntity& entity);

/// Block-diagonal T over all entities, identity on aux columns.
Eigen::MatrixXd assemble_T(const VariationalModel& model);

enum class Provenance { Analytic, FiniteDifference };

struct GeometricPerturbationMatrix {
  Eigen::MatrixXd matrix;
  CoordinateLayout layout;
  Provenance provenance = Provenance::Analytic;
};

/// G = J T. Throws ModelError if the model's constraints cannot be translated.
GeometricPerturbationMatrix geometric_perturbation_matrix(const VariationalModel& model);

/// G by central differences of the residuals under exact screw motions of
/// each entity (translation, rotation about a global axis). Aux columns are
/// copied from the analytic Jacobian. `step` must lie in [1e-7, 1e-3].
GeometricPerturbationMatrix finite_difference_G(const VariationalModel& model, double step = 1e-5);

enum class MotionKind { RigidTranslation, RigidRotation, InvariantTranslation, InvariantRotation };

struct MotionLabel {
  MotionKind kind = MotionKind::RigidTranslation;
  /// Axis index 0..2 for rigid columns; empty entity for rigid columns.
  int axis = 0;
  std::string entity;
};

struct MotionBasis {
  Eigen::MatrixXd matrix;
  std::vector<MotionLabel> labels;
};

/// Six rigid-body motion columns over `entity_count` screw blocks followed by
/// `aux_count` zero rows.
Eigen::MatrixXd rigid_motion_basis(std::size_t entity_count, std::size_t aux_count = 0);

/// Invariant motions of one entity as 6-vectors (dt, dr), one per column:
/// plane 3, line 2, cylinder 2, sphere 3, cone 1, torus 1, point 3.
Eigen::Matrix<double, 6, Eigen::Dynamic> invariant_motion_basis(const GeometricEntity& entity);

/// Rigid columns, then every entity's invariant columns in entity order.
MotionBasis motion_basis_B(const VariationalModel& model);

/// Motion basis restricted to a subset of entities (rows: 6 per listed
/// entity, in the given order; no aux rows).
Eigen::MatrixXd restricted_motion_basis(const VariationalModel& model, std::span<const std::size_t> entities);

}  // namespace gcsa
