#include "gcsa/perturbation.hpp"

#include <Eigen/Geometry>

#include <cmath>

namespace gcsa {

Eigen::Matrix<double, 6, 6> entity_transform(const GeometricEntity& entity) {
  Eigen::Matrix<double, 6, 6> t = Eigen::Matrix<double, 6, 6>::Zero();
  t.topLeftCorner<3, 3>() = Mat3::Identity();
  t.topRightCorner<3, 3>() = -skew(entity.position);
  if (has_orientation(entity.kind)) t.bottomRightCorner<3, 3>() = -skew(entity.orientation);
  return t;
}

Eigen::MatrixXd assemble_T(const VariationalModel& model) {
  const auto& layout = model.layout();
  const auto width = static_cast<Eigen::Index>(layout.width());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(width, width);
  const auto& ents = model.entities();
  for (std::size_t i = 0; i < ents.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(layout.translation_column(i));
    t.block<6, 6>(col, col) = entity_transform(ents[i]);
  }
  const auto screw = static_cast<Eigen::Index>(layout.screw_width());
  t.bottomRightCorner(width - screw, width - screw).setIdentity();
  return t;
}

GeometricPerturbationMatrix geometric_perturbation_matrix(const VariationalModel& model) {
  const Eigen::MatrixXd jac = parametric_jacobian(model);
  const auto& layout = model.layout();
  GeometricPerturbationMatrix g;
  g.layout = layout;
  g.matrix.resize(jac.rows(), jac.cols());
  // Per-entity product instead of the full (mostly zero) J * T.
  const auto& ents = model.entities();
  for (std::size_t i = 0; i < ents.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(layout.translation_column(i));
    g.matrix.middleCols<6>(col) = jac.middleCols<6>(col) * entity_transform(ents[i]);
  }
  const auto screw = static_cast<Eigen::Index>(layout.screw_width());
  g.matrix.rightCols(jac.cols() - screw) = jac.rightCols(jac.cols() - screw);
  g.provenance = Provenance::Analytic;
  return g;
}

GeometricPerturbationMatrix finite_difference_G(const VariationalModel& model, double step) {
  if (!(step >= 1e-7 && step <= 1e-3)) throw ModelError("finite-difference step must lie in [1e-7, 1e-3]");
  const auto blocks = translate_all(model);
  const auto base = model.poses();
  const Eigen::VectorXd aux = witness_aux(model, blocks);
  const auto& layout = model.layout();
  const auto& ents = model.entities();

  const auto rows = static_cast<Eigen::Index>(row_offsets(blocks).back());
  GeometricPerturbationMatrix g;
  g.layout = layout;
  g.provenance = Provenance::FiniteDifference;
  g.matrix = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(layout.width()));

  std::vector<Pose> poses = base;
  for (std::size_t i = 0; i < ents.size(); ++i) {
    for (int axis = 0; axis < 3; ++axis) {
      const Vec3 e = Vec3::Unit(axis);
      for (int rotational = 0; rotational < 2; ++rotational) {
        auto moved = [&](double h) {
          poses[i] = base[i];
          if (rotational) {
            const Mat3 r = Eigen::AngleAxisd(h, e).toRotationMatrix();
            poses[i].position = r * base[i].position;
            poses[i].orientation = r * base[i].orientation;
          } else {
            poses[i].position = base[i].position + h * e;
          }
          Eigen::VectorXd f = eval_residuals(model, blocks, poses, aux);
          poses[i] = base[i];
          return f;
        };
        const Eigen::VectorXd plus = moved(step);
        const Eigen::VectorXd minus = moved(-step);
        const auto col = static_cast<Eigen::Index>(
            (rotational ? layout.rotation_column(i) : layout.translation_column(i)) + axis);
        g.matrix.col(col) = (plus - minus) / (2.0 * step);
      }
    }
  }

  const auto screw = static_cast<Eigen::Index>(layout.screw_width());
  if (layout.aux_count() > 0) {
    const Eigen::MatrixXd jac = parametric_jacobian(model, blocks, base, aux);
    g.matrix.rightCols(jac.cols() - screw) = jac.rightCols(jac.cols() - screw);
  }
  return g;
}

Eigen::MatrixXd rigid_motion_basis(std::size_t entity_count, std::size_t aux_count) {
  const auto rows = static_cast<Eigen::Index>(6 * entity_count + aux_count);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(rows, 6);
  for (std::size_t i = 0; i < entity_count; ++i) {
    const auto r = static_cast<Eigen::Index>(6 * i);
    for (int axis = 0; axis < 3; ++axis) {
      b(r + axis, axis) = 1.0;          // translation along axis
      b(r + 3 + axis, 3 + axis) = 1.0;  // rotation about axis
    }
  }
  return b;
}

namespace {

/// Unit vector orthogonal to n: Gram-Schmidt on the lowest-index coordinate
/// axis least parallel to n.
Vec3 orthogonal_unit(const Vec3& n) {
  int best = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(n(k)) < std::abs(n(best))) best = k;
  }
  Vec3 u = Vec3::Unit(best) - n(best) * n;
  return u.normalized();
}

Eigen::Matrix<double, 6, 1> translation(const Vec3& v) {
  Eigen::Matrix<double, 6, 1> m;
  m << v, Vec3::Zero();
  return m;
}

/// Rotation about the axis through q with direction v.
Eigen::Matrix<double, 6, 1> screw_rotation(const Vec3& q, const Vec3& v) {
  Eigen::Matrix<double, 6, 1> m;
  m << q.cross(v), v;
  return m;
}

}  // namespace

Eigen::Matrix<double, 6, Eigen::Dynamic> invariant_motion_basis(const GeometricEntity& entity) {
  const Vec3& q = entity.position;
  const Vec3& v = entity.orientation;
  Eigen::Matrix<double, 6, Eigen::Dynamic> cols;
  switch (entity.kind) {
    case EntityKind::Plane: {
      const Vec3 u = orthogonal_unit(v);
      const Vec3 w = v.cross(u);
      cols.resize(6, 3);
      cols << translation(u), translation(w), screw_rotation(q, v);
      break;
    }
    case EntityKind::Line:
    case EntityKind::Cylinder:
      cols.resize(6, 2);
      cols << translation(v), screw_rotation(q, v);
      break;
    case EntityKind::Cone:
    case EntityKind::Torus:
      cols.resize(6, 1);
      cols << screw_rotation(q, v);
      break;
    case EntityKind::Sphere:
    case EntityKind::Point:
      cols.resize(6, 3);
      cols << screw_rotation(q, Vec3::UnitX()), screw_rotation(q, Vec3::UnitY()), screw_rotation(q, Vec3::UnitZ());
      break;
  }
  return cols;
}

MotionBasis motion_basis_B(const VariationalModel& model) {
  const auto& layout = model.layout();
  const auto& ents = model.entities();
  std::vector<Eigen::Matrix<double, 6, Eigen::Dynamic>> invariants;
  Eigen::Index extra = 0;
  for (const auto& e : ents) {
    invariants.push_back(invariant_motion_basis(e));
    extra += invariants.back().cols();
  }

  MotionBasis basis;
  basis.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(layout.width()), 6 + extra);
  basis.matrix.leftCols<6>() = rigid_motion_basis(ents.size(), layout.aux_count());
  for (int axis = 0; axis < 3; ++axis) basis.labels.push_back({MotionKind::RigidTranslation, axis, {}});
  for (int axis = 0; axis < 3; ++axis) basis.labels.push_back({MotionKind::RigidRotation, axis, {}});

  Eigen::Index col = 6;
  for (std::size_t i = 0; i < ents.size(); ++i) {
    const auto& inv = invariants[i];
    const auto row = static_cast<Eigen::Index>(layout.translation_column(i));
    for (Eigen::Index k = 0; k < inv.cols(); ++k) {
      basis.matrix.block<6, 1>(row, col) = inv.col(k);
      const bool rotational = inv.col(k).tail<3>().squaredNorm() > 0.0;
      basis.labels.push_back({rotational ? MotionKind::InvariantRotation : MotionKind::InvariantTranslation,
                              static_cast<int>(k), ents[i].id});
      ++col;
    }
  }
  return basis;
}

Eigen::MatrixXd restricted_motion_basis(const VariationalModel& model, std::span<const std::size_t> entities) {
  const auto& ents = model.entities();
  Eigen::Index extra = 0;
  for (std::size_t i : entities) extra += invariant_motion_basis(ents[i]).cols();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(6 * entities.size()), 6 + extra);
  b.leftCols<6>() = rigid_motion_basis(entities.size());
  Eigen::Index col = 6;
  for (std::size_t k = 0; k < entities.size(); ++k) {
    const auto inv = invariant_motion_basis(ents[entities[k]]);
    b.block(static_cast<Eigen::Index>(6 * k), col, 6, inv.cols()) = inv;
    col += inv.cols();
  }
  return b;
}

}  // namespace gcsa
