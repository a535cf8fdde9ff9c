#pragma once

// Constraint-to-equation translation.
//
// Each constraint becomes a block of residual equations over the positions
// and orientations of its entities, plus optional auxiliary scalars (the `t`
// of a collinearity equation v1 + t v2 = 0). Sign and branch choices are
// frozen from the witness geometry so the witness is an exact root.

#include "gcsa/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gcsa {

/// Rows of one equation block's Jacobian with respect to a single entity's
/// (dp, dn): an rows x 6 matrix, columns (dp, dn).
struct EntityJacobian {
  std::size_t entity = 0;
  Eigen::MatrixXd block;
};

struct BlockJacobian {
  std::vector<EntityJacobian> entity_blocks;
  /// rows x aux_count
  Eigen::MatrixXd aux_block;
};

class EquationBlock {
 public:
  const std::string& constraint_id() const { return constraint_id_; }
  ConstraintKind kind() const { return kind_; }
  std::size_t rows() const { return rows_; }
  std::size_t aux_count() const { return aux_count_; }
  const std::vector<std::size_t>& entities() const { return entities_; }

  /// Aux values that make the witness geometry a root of the block.
  Eigen::VectorXd initial_aux(std::span<const Pose> poses) const;

  Eigen::VectorXd residuals(std::span<const Pose> poses, const Eigen::VectorXd& aux) const;

  /// Exact derivatives of residuals() with respect to each referenced
  /// entity's (p, n) and the block's aux scalars.
  BlockJacobian jacobian(std::span<const Pose> poses, const Eigen::VectorXd& aux) const;

  /// Scale the witness residual threshold is multiplied by.
  double value_scale() const { return value_scale_; }

 private:
  friend EquationBlock translate_constraint(const VariationalModel& model, std::size_t index);

  std::string constraint_id_;
  ConstraintKind kind_ = ConstraintKind::PlanePlanePerpendicular;
  std::size_t rows_ = 0;
  std::size_t aux_count_ = 0;
  /// Referenced entities, reordered into the kind's canonical roles
  /// (plane before cylinder for the mixed kinds, point before plane).
  std::vector<std::size_t> entities_;
  double value_ = 0.0;
  /// Frozen sign (distance side, coaxial direction) or frozen cosine (angle).
  double frozen_ = 1.0;
  double value_scale_ = 1.0;
};

/// Translates constraint `index` of `model`. Throws ModelError on signature
/// mismatch, an angle outside (0, pi) or a zero-length edge.
EquationBlock translate_constraint(const VariationalModel& model, std::size_t index);

/// Static row/aux counts per kind.
std::size_t row_count(ConstraintKind kind);
std::size_t aux_count(ConstraintKind kind);

/// All blocks of a model, in constraint order.
std::vector<EquationBlock> translate_all(const VariationalModel& model);

/// Witness aux values for every block, concatenated in layout order.
Eigen::VectorXd witness_aux(const VariationalModel& model, std::span<const EquationBlock> blocks);

/// Residual vector F at the given poses and aux values.
Eigen::VectorXd eval_residuals(const VariationalModel& model, std::span<const EquationBlock> blocks,
                               std::span<const Pose> poses, const Eigen::VectorXd& aux);

/// F at the stored witness geometry with witness aux values.
Eigen::VectorXd eval_residuals(const VariationalModel& model);

/// Row index of the first equation of every block, plus the total at the end.
std::vector<std::size_t> row_offsets(std::span<const EquationBlock> blocks);

/// Owning constraint index of every equation row.
std::vector<std::size_t> row_owners(std::span<const EquationBlock> blocks);

/// Dense parametric Jacobian J: one row per equation, columns (dp, dn) per
/// entity in entity order, then aux columns.
Eigen::MatrixXd parametric_jacobian(const VariationalModel& model, std::span<const EquationBlock> blocks,
                                    std::span<const Pose> poses, const Eigen::VectorXd& aux);

/// J at the stored witness.
Eigen::MatrixXd parametric_jacobian(const VariationalModel& model);

}  // namespace gcsa
