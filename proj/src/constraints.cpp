#include "gcsa/constraints.hpp"

#include <cmath>
#include <numbers>

namespace gcsa {

namespace {

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

bool is_axis_kind(EntityKind k) {
  return k == EntityKind::Cylinder || k == EntityKind::Line || k == EntityKind::Cone ||
         k == EntityKind::Torus;
}

[[noreturn]] void signature_error(const Constraint& c, const std::string& expected) {
  throw ModelError("constraint '" + c.id + "': signature mismatch, " + to_string(c.kind) + " expects " +
                   expected);
}

/// Orders the two referenced entities into (first-role, second-role).
std::vector<std::size_t> assign_roles(const VariationalModel& model, std::size_t index) {
  const Constraint& c = model.constraints()[index];
  const auto& refs = model.constraint_entities(index);
  const auto& ents = model.entities();
  if (refs.size() != 2) signature_error(c, "two entities");
  const EntityKind k0 = ents[refs[0]].kind;
  const EntityKind k1 = ents[refs[1]].kind;
  auto both = [&](auto pred) { return pred(k0) && pred(k1); };
  auto is = [](EntityKind want) { return [want](EntityKind k) { return k == want; }; };

  switch (c.kind) {
    case ConstraintKind::PlanePlaneDistance:
    case ConstraintKind::PlanePlaneAngle:
    case ConstraintKind::PlanePlaneParallel:
    case ConstraintKind::PlanePlanePerpendicular:
      if (!both(is(EntityKind::Plane))) signature_error(c, "two planes");
      return refs;
    case ConstraintKind::EdgeLength:
      if (!both(is(EntityKind::Point))) signature_error(c, "two points");
      return refs;
    case ConstraintKind::LineLineDistance:
      if (!both(is(EntityKind::Line))) signature_error(c, "two lines");
      return refs;
    case ConstraintKind::CylinderCylinderCoaxial:
      if (!both(is_axis_kind)) signature_error(c, "two axis entities (cylinder, line, cone, torus)");
      return refs;
    case ConstraintKind::PlaneCylinderDistance:
    case ConstraintKind::PlaneCylinderTangent:
      if (k0 == EntityKind::Plane && k1 == EntityKind::Cylinder) return refs;
      if (k0 == EntityKind::Cylinder && k1 == EntityKind::Plane) return {refs[1], refs[0]};
      signature_error(c, "a plane and a cylinder");
    case ConstraintKind::PointOnPlane:
      if (k0 == EntityKind::Point && k1 == EntityKind::Plane) return refs;
      if (k0 == EntityKind::Plane && k1 == EntityKind::Point) return {refs[1], refs[0]};
      signature_error(c, "a point and a plane");
  }
  signature_error(c, "a known kind");
}

/// Signed shortest distance between two non-parallel lines.
double line_line_signed_distance(const Pose& a, const Pose& b) {
  const Vec3 w = a.orientation.cross(b.orientation);
  return w.dot(b.position - a.position) / w.norm();
}

}  // namespace

std::size_t row_count(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::PlanePlaneDistance:
      return 4;
    case ConstraintKind::PlanePlaneParallel:
      return 3;
    case ConstraintKind::PlanePlanePerpendicular:
    case ConstraintKind::PlanePlaneAngle:
    case ConstraintKind::EdgeLength:
    case ConstraintKind::PointOnPlane:
    case ConstraintKind::LineLineDistance:
      return 1;
    case ConstraintKind::PlaneCylinderDistance:
    case ConstraintKind::PlaneCylinderTangent:
      return 2;
    case ConstraintKind::CylinderCylinderCoaxial:
      return 6;
  }
  return 0;
}

std::size_t aux_count(ConstraintKind kind) {
  return kind == ConstraintKind::PlanePlaneDistance || kind == ConstraintKind::PlanePlaneParallel ? 1 : 0;
}

EquationBlock translate_constraint(const VariationalModel& model, std::size_t index) {
  const Constraint& c = model.constraints()[index];
  EquationBlock block;
  block.constraint_id_ = c.id;
  block.kind_ = c.kind;
  block.rows_ = row_count(c.kind);
  block.aux_count_ = aux_count(c.kind);
  block.entities_ = assign_roles(model, index);
  block.value_ = c.value.value_or(0.0);

  const auto& ents = model.entities();
  const GeometricEntity& a = ents[block.entities_[0]];
  const GeometricEntity& b = ents[block.entities_[1]];

  switch (c.kind) {
    case ConstraintKind::PlanePlaneDistance:
      if (block.value_ < 0.0) throw ModelError("constraint '" + c.id + "': negative distance");
      block.frozen_ = sign_of(a.orientation.dot(b.position - a.position));
      block.value_scale_ = std::abs(block.value_);
      break;
    case ConstraintKind::PlanePlaneAngle: {
      if (!(block.value_ > 0.0 && block.value_ < std::numbers::pi)) {
        throw ModelError("constraint '" + c.id + "': angle outside (0, pi)");
      }
      // Pick whichever of theta and pi - theta the witness realizes.
      const double cosine = std::cos(block.value_);
      const double measured = a.orientation.dot(b.orientation);
      block.frozen_ = std::abs(measured - cosine) <= std::abs(measured + cosine) ? cosine : -cosine;
      break;
    }
    case ConstraintKind::EdgeLength:
      if (!(block.value_ > 0.0)) throw ModelError("constraint '" + c.id + "': edge length must be positive");
      if ((a.position - b.position).norm() < 1e-12) {
        throw ModelError("constraint '" + c.id + "': zero-length edge at witness");
      }
      block.value_scale_ = block.value_ * block.value_;
      break;
    case ConstraintKind::PlaneCylinderDistance:
      if (block.value_ < 0.0) throw ModelError("constraint '" + c.id + "': negative distance");
      block.frozen_ = sign_of(a.orientation.dot(a.position - b.position));
      block.value_scale_ = std::abs(block.value_);
      break;
    case ConstraintKind::PlaneCylinderTangent:
      block.value_ = b.size_params.at(0);
      block.frozen_ = sign_of(a.orientation.dot(a.position - b.position));
      block.value_scale_ = block.value_;
      break;
    case ConstraintKind::CylinderCylinderCoaxial:
      block.frozen_ = sign_of(a.orientation.dot(b.orientation));
      break;
    case ConstraintKind::LineLineDistance:
      if (a.orientation.cross(b.orientation).norm() < 1e-9) {
        throw ModelError("constraint '" + c.id + "': line_line_distance needs non-parallel lines");
      }
      if (block.value_ < 0.0) throw ModelError("constraint '" + c.id + "': negative distance");
      block.frozen_ = sign_of(line_line_signed_distance({a.position, a.orientation}, {b.position, b.orientation}));
      block.value_scale_ = std::abs(block.value_);
      break;
    case ConstraintKind::PlanePlaneParallel:
    case ConstraintKind::PlanePlanePerpendicular:
    case ConstraintKind::PointOnPlane:
      break;
  }
  return block;
}

Eigen::VectorXd EquationBlock::initial_aux(std::span<const Pose> poses) const {
  Eigen::VectorXd aux(aux_count_);
  if (aux_count_ == 1) {
    aux(0) = -poses[entities_[0]].orientation.dot(poses[entities_[1]].orientation);
  }
  return aux;
}

Eigen::VectorXd EquationBlock::residuals(std::span<const Pose> poses, const Eigen::VectorXd& aux) const {
  const Pose& a = poses[entities_[0]];
  const Pose& b = poses[entities_[1]];
  Eigen::VectorXd r(rows_);
  switch (kind_) {
    case ConstraintKind::PlanePlaneDistance:
      r.head<3>() = a.orientation + aux(0) * b.orientation;
      r(3) = a.orientation.dot(b.position - a.position) - frozen_ * value_;
      break;
    case ConstraintKind::PlanePlaneParallel:
      r = a.orientation + aux(0) * b.orientation;
      break;
    case ConstraintKind::PlanePlanePerpendicular:
      r(0) = a.orientation.dot(b.orientation);
      break;
    case ConstraintKind::PlanePlaneAngle:
      r(0) = a.orientation.dot(b.orientation) - frozen_;
      break;
    case ConstraintKind::EdgeLength:
      r(0) = (a.position - b.position).squaredNorm() - value_ * value_;
      break;
    case ConstraintKind::PlaneCylinderDistance:
    case ConstraintKind::PlaneCylinderTangent:
      r(0) = a.orientation.dot(b.orientation);
      r(1) = a.orientation.dot(a.position - b.position) - frozen_ * value_;
      break;
    case ConstraintKind::CylinderCylinderCoaxial:
      r.head<3>() = a.orientation - frozen_ * b.orientation;
      r.tail<3>() = a.orientation.cross(a.position - b.position);
      break;
    case ConstraintKind::PointOnPlane:
      r(0) = b.orientation.dot(a.position - b.position);
      break;
    case ConstraintKind::LineLineDistance:
      r(0) = line_line_signed_distance(a, b) - frozen_ * value_;
      break;
  }
  return r;
}

BlockJacobian EquationBlock::jacobian(std::span<const Pose> poses, const Eigen::VectorXd& aux) const {
  const Pose& a = poses[entities_[0]];
  const Pose& b = poses[entities_[1]];
  const auto rows = static_cast<Eigen::Index>(rows_);
  // Columns 0..2: dp, 3..5: dn.
  Eigen::MatrixXd ja = Eigen::MatrixXd::Zero(rows, 6);
  Eigen::MatrixXd jb = Eigen::MatrixXd::Zero(rows, 6);
  Eigen::MatrixXd jaux = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(aux_count_));

  switch (kind_) {
    case ConstraintKind::PlanePlaneDistance:
    case ConstraintKind::PlanePlaneParallel:
      ja.block<3, 3>(0, 3) = Mat3::Identity();
      jb.block<3, 3>(0, 3) = aux(0) * Mat3::Identity();
      jaux.block<3, 1>(0, 0) = b.orientation;
      if (kind_ == ConstraintKind::PlanePlaneDistance) {
        ja.block<1, 3>(3, 0) = -a.orientation.transpose();
        ja.block<1, 3>(3, 3) = (b.position - a.position).transpose();
        jb.block<1, 3>(3, 0) = a.orientation.transpose();
      }
      break;
    case ConstraintKind::PlanePlanePerpendicular:
    case ConstraintKind::PlanePlaneAngle:
      ja.block<1, 3>(0, 3) = b.orientation.transpose();
      jb.block<1, 3>(0, 3) = a.orientation.transpose();
      break;
    case ConstraintKind::EdgeLength: {
      const Vec3 d = 2.0 * (a.position - b.position);
      ja.block<1, 3>(0, 0) = d.transpose();
      jb.block<1, 3>(0, 0) = -d.transpose();
      break;
    }
    case ConstraintKind::PlaneCylinderDistance:
    case ConstraintKind::PlaneCylinderTangent:
      ja.block<1, 3>(0, 3) = b.orientation.transpose();
      jb.block<1, 3>(0, 3) = a.orientation.transpose();
      ja.block<1, 3>(1, 0) = a.orientation.transpose();
      ja.block<1, 3>(1, 3) = (a.position - b.position).transpose();
      jb.block<1, 3>(1, 0) = -a.orientation.transpose();
      break;
    case ConstraintKind::CylinderCylinderCoaxial: {
      ja.block<3, 3>(0, 3) = Mat3::Identity();
      jb.block<3, 3>(0, 3) = -frozen_ * Mat3::Identity();
      const Mat3 d_cross = skew(a.orientation);
      ja.block<3, 3>(3, 0) = d_cross;
      jb.block<3, 3>(3, 0) = -d_cross;
      ja.block<3, 3>(3, 3) = -skew(a.position - b.position);
      break;
    }
    case ConstraintKind::PointOnPlane:
      ja.block<1, 3>(0, 0) = b.orientation.transpose();
      jb.block<1, 3>(0, 0) = -b.orientation.transpose();
      jb.block<1, 3>(0, 3) = (a.position - b.position).transpose();
      break;
    case ConstraintKind::LineLineDistance: {
      const Vec3 w = a.orientation.cross(b.orientation);
      const Vec3 u = b.position - a.position;
      const double wn = w.norm();
      const Vec3 df_dw = u / wn - (w.dot(u) / (wn * wn * wn)) * w;
      ja.block<1, 3>(0, 0) = -(w / wn).transpose();
      jb.block<1, 3>(0, 0) = (w / wn).transpose();
      ja.block<1, 3>(0, 3) = df_dw.transpose() * -skew(b.orientation);
      jb.block<1, 3>(0, 3) = df_dw.transpose() * skew(a.orientation);
      break;
    }
  }

  BlockJacobian out;
  out.entity_blocks.push_back({entities_[0], std::move(ja)});
  out.entity_blocks.push_back({entities_[1], std::move(jb)});
  out.aux_block = std::move(jaux);
  return out;
}

std::vector<EquationBlock> translate_all(const VariationalModel& model) {
  std::vector<EquationBlock> blocks;
  blocks.reserve(model.constraints().size());
  for (std::size_t c = 0; c < model.constraints().size(); ++c) blocks.push_back(translate_constraint(model, c));
  return blocks;
}

Eigen::VectorXd witness_aux(const VariationalModel& model, std::span<const EquationBlock> blocks) {
  const auto poses = model.poses();
  const auto& layout = model.layout();
  Eigen::VectorXd aux(static_cast<Eigen::Index>(layout.aux_count()));
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    if (blocks[c].aux_count() == 0) continue;
    const auto offset = static_cast<Eigen::Index>(layout.aux_column(c) - layout.screw_width());
    aux.segment(offset, static_cast<Eigen::Index>(blocks[c].aux_count())) = blocks[c].initial_aux(poses);
  }
  return aux;
}

std::vector<std::size_t> row_offsets(std::span<const EquationBlock> blocks) {
  std::vector<std::size_t> offsets;
  offsets.reserve(blocks.size() + 1);
  std::size_t row = 0;
  for (const auto& b : blocks) {
    offsets.push_back(row);
    row += b.rows();
  }
  offsets.push_back(row);
  return offsets;
}

std::vector<std::size_t> row_owners(std::span<const EquationBlock> blocks) {
  std::vector<std::size_t> owners;
  for (std::size_t c = 0; c < blocks.size(); ++c) owners.insert(owners.end(), blocks[c].rows(), c);
  return owners;
}

namespace {

Eigen::VectorXd block_aux(const CoordinateLayout& layout, std::size_t c, const EquationBlock& block,
                          const Eigen::VectorXd& aux) {
  if (block.aux_count() == 0) return {};
  const auto offset = static_cast<Eigen::Index>(layout.aux_column(c) - layout.screw_width());
  return aux.segment(offset, static_cast<Eigen::Index>(block.aux_count()));
}

}  // namespace

Eigen::VectorXd eval_residuals(const VariationalModel& model, std::span<const EquationBlock> blocks,
                               std::span<const Pose> poses, const Eigen::VectorXd& aux) {
  const auto offsets = row_offsets(blocks);
  Eigen::VectorXd f(static_cast<Eigen::Index>(offsets.back()));
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    f.segment(static_cast<Eigen::Index>(offsets[c]), static_cast<Eigen::Index>(blocks[c].rows())) =
        blocks[c].residuals(poses, block_aux(model.layout(), c, blocks[c], aux));
  }
  return f;
}

Eigen::VectorXd eval_residuals(const VariationalModel& model) {
  const auto blocks = translate_all(model);
  const auto poses = model.poses();
  return eval_residuals(model, blocks, poses, witness_aux(model, blocks));
}

Eigen::MatrixXd parametric_jacobian(const VariationalModel& model, std::span<const EquationBlock> blocks,
                                    std::span<const Pose> poses, const Eigen::VectorXd& aux) {
  const auto& layout = model.layout();
  const auto offsets = row_offsets(blocks);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(offsets.back()),
                                              static_cast<Eigen::Index>(layout.width()));
  const auto& ents = model.entities();
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    const auto row = static_cast<Eigen::Index>(offsets[c]);
    const auto rows = static_cast<Eigen::Index>(blocks[c].rows());
    BlockJacobian bj = blocks[c].jacobian(poses, block_aux(layout, c, blocks[c], aux));
    for (const auto& eb : bj.entity_blocks) {
      const auto col = static_cast<Eigen::Index>(layout.translation_column(eb.entity));
      jac.block(row, col, rows, 3) += eb.block.leftCols<3>();
      // Orientation-free entities have no dn columns.
      if (has_orientation(ents[eb.entity].kind)) jac.block(row, col + 3, rows, 3) += eb.block.rightCols<3>();
    }
    if (blocks[c].aux_count() > 0) {
      jac.block(row, static_cast<Eigen::Index>(layout.aux_column(c)), rows, bj.aux_block.cols()) = bj.aux_block;
    }
  }
  return jac;
}

Eigen::MatrixXd parametric_jacobian(const VariationalModel& model) {
  const auto blocks = translate_all(model);
  const auto poses = model.poses();
  return parametric_jacobian(model, blocks, poses, witness_aux(model, blocks));
}

}  // namespace gcsa
