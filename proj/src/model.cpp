#include "gcsa/model.hpp"

#include "gcsa/constraints.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <unordered_set>
#include <utility>

namespace gcsa {

namespace {

constexpr std::array<std::pair<EntityKind, const char*>, 7> kEntityNames{{
    {EntityKind::Plane, "plane"},
    {EntityKind::Line, "line"},
    {EntityKind::Cylinder, "cylinder"},
    {EntityKind::Sphere, "sphere"},
    {EntityKind::Cone, "cone"},
    {EntityKind::Torus, "torus"},
    {EntityKind::Point, "point"},
}};

constexpr std::array<std::pair<ConstraintKind, const char*>, 10> kConstraintNames{{
    {ConstraintKind::PlanePlaneDistance, "plane_plane_distance"},
    {ConstraintKind::PlanePlaneAngle, "plane_plane_angle"},
    {ConstraintKind::PlanePlaneParallel, "plane_plane_parallel"},
    {ConstraintKind::PlanePlanePerpendicular, "plane_plane_perpendicular"},
    {ConstraintKind::EdgeLength, "edge_length"},
    {ConstraintKind::PlaneCylinderDistance, "plane_cylinder_distance"},
    {ConstraintKind::PlaneCylinderTangent, "plane_cylinder_tangent"},
    {ConstraintKind::CylinderCylinderCoaxial, "cylinder_cylinder_coaxial"},
    {ConstraintKind::PointOnPlane, "point_on_plane"},
    {ConstraintKind::LineLineDistance, "line_line_distance"},
}};

constexpr double kOrientationSlack = 1e-9;

}  // namespace

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

std::string to_string(EntityKind kind) {
  for (const auto& [k, name] : kEntityNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<EntityKind> entity_kind_from_string(const std::string& name) {
  for (const auto& [k, n] : kEntityNames) {
    if (name == n) return k;
  }
  return std::nullopt;
}

bool has_orientation(EntityKind kind) {
  return kind != EntityKind::Sphere && kind != EntityKind::Point;
}

std::size_t size_param_count(EntityKind kind) {
  switch (kind) {
    case EntityKind::Cylinder:
    case EntityKind::Sphere:
    case EntityKind::Cone:
      return 1;
    case EntityKind::Torus:
      return 2;
    default:
      return 0;
  }
}

std::string to_string(ConstraintKind kind) {
  for (const auto& [k, name] : kConstraintNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ConstraintKind> constraint_kind_from_string(const std::string& name) {
  for (const auto& [k, n] : kConstraintNames) {
    if (name == n) return k;
  }
  return std::nullopt;
}

bool is_dimensional(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::PlanePlaneDistance:
    case ConstraintKind::PlanePlaneAngle:
    case ConstraintKind::EdgeLength:
    case ConstraintKind::PlaneCylinderDistance:
    case ConstraintKind::LineLineDistance:
      return true;
    default:
      return false;
  }
}

CoordinateLayout::CoordinateLayout(std::size_t entity_count, std::vector<std::size_t> aux_per_constraint)
    : entity_count_(entity_count), aux_per_constraint_(std::move(aux_per_constraint)) {
  aux_offset_.reserve(aux_per_constraint_.size());
  for (std::size_t n : aux_per_constraint_) {
    aux_offset_.push_back(aux_count_);
    aux_count_ += n;
  }
}

std::size_t VariationalModel::entity_index(const std::string& id) const {
  auto found = find_entity(id);
  if (!found) throw ModelError("unknown entity '" + id + "'");
  return *found;
}

std::optional<std::size_t> VariationalModel::find_entity(const std::string& id) const {
  auto it = entity_lookup_.find(id);
  if (it == entity_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t VariationalModel::constraint_index(const std::string& id) const {
  auto it = constraint_lookup_.find(id);
  if (it == constraint_lookup_.end()) throw ModelError("unknown constraint '" + id + "'");
  return it->second;
}

std::vector<Pose> VariationalModel::poses() const {
  std::vector<Pose> out;
  out.reserve(entities_.size());
  for (const auto& e : entities_) out.push_back({e.position, e.orientation});
  return out;
}

VariationalModel build_model(std::vector<GeometricEntity> entities, std::vector<Constraint> constraints,
                             double tolerance) {
  if (entities.empty()) throw ModelError("model has no entities");
  if (!(tolerance > 0.0)) throw ModelError("tolerance must be positive");

  VariationalModel model;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    auto& e = entities[i];
    if (e.id.empty()) throw ModelError("entity " + std::to_string(i) + " has an empty id");
    if (!model.entity_lookup_.emplace(e.id, i).second) {
      throw ModelError("duplicate entity id '" + e.id + "'");
    }
    if (!e.position.allFinite()) throw ModelError("entity '" + e.id + "': non-finite position");
    if (has_orientation(e.kind)) {
      const double norm = e.orientation.norm();
      if (!std::isfinite(norm) || std::abs(norm - 1.0) > kOrientationSlack) {
        std::ostringstream msg;
        msg << "entity '" << e.id << "': orientation is not a unit vector (norm " << norm << ")";
        throw ModelError(msg.str());
      }
      e.orientation /= norm;
    } else if (!e.orientation.isZero(0.0)) {
      throw ModelError("entity '" + e.id + "': " + to_string(e.kind) + " carries no orientation");
    }
    if (e.size_params.size() != size_param_count(e.kind)) {
      throw ModelError("entity '" + e.id + "': " + to_string(e.kind) + " expects " +
                       std::to_string(size_param_count(e.kind)) + " size parameter(s)");
    }
    for (double s : e.size_params) {
      if (!(s > 0.0) || !std::isfinite(s)) {
        throw ModelError("entity '" + e.id + "': size parameter must be positive");
      }
    }
  }

  model.constraint_entities_.reserve(constraints.size());
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    const auto& con = constraints[c];
    if (con.id.empty()) throw ModelError("constraint " + std::to_string(c) + " has an empty id");
    if (!model.constraint_lookup_.emplace(con.id, c).second) {
      throw ModelError("duplicate constraint id '" + con.id + "'");
    }
    std::vector<std::size_t> refs;
    for (const auto& ref : con.entity_refs) {
      auto it = model.entity_lookup_.find(ref);
      if (it == model.entity_lookup_.end()) {
        throw ModelError("constraint '" + con.id + "': dangling reference to '" + ref + "'");
      }
      refs.push_back(it->second);
    }
    if (is_dimensional(con.kind) != con.value.has_value()) {
      throw ModelError("constraint '" + con.id + "': " + to_string(con.kind) +
                       (is_dimensional(con.kind) ? " requires a value" : " takes no value"));
    }
    model.constraint_entities_.push_back(std::move(refs));
  }

  std::vector<std::size_t> aux;
  aux.reserve(constraints.size());
  for (const auto& con : constraints) aux.push_back(aux_count(con.kind));

  model.layout_ = CoordinateLayout(entities.size(), std::move(aux));
  model.entities_ = std::move(entities);
  model.constraints_ = std::move(constraints);
  model.tolerance_ = tolerance;

  // Signature, angle range and edge degeneracy checks live in the translator.
  for (std::size_t c = 0; c < model.constraints_.size(); ++c) translate_constraint(model, c);
  return model;
}

WitnessReport validate_witness(const VariationalModel& model) {
  WitnessReport report;
  const auto poses = model.poses();
  for (std::size_t c = 0; c < model.constraints().size(); ++c) {
    const EquationBlock block = translate_constraint(model, c);
    const Eigen::VectorXd aux = block.initial_aux(poses);
    const Eigen::VectorXd r = block.residuals(poses, aux);
    ConstraintResidual entry;
    entry.constraint_id = block.constraint_id();
    entry.max_abs = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    entry.threshold = kWitnessTolerance * std::max(1.0, block.value_scale());
    if (entry.max_abs > entry.threshold) {
      report.valid = false;
      report.violated.push_back(entry.constraint_id);
    }
    report.max_abs_residual = std::max(report.max_abs_residual, entry.max_abs);
    report.per_constraint.push_back(std::move(entry));
  }
  return report;
}

VariationalModel rigidly_transformed(const VariationalModel& model, const Mat3& rotation,
                                     const Vec3& translation) {
  std::vector<GeometricEntity> entities = model.entities();
  for (auto& e : entities) {
    e.position = rotation * e.position + translation;
    if (has_orientation(e.kind)) e.orientation = (rotation * e.orientation).normalized();
  }
  return build_model(std::move(entities), model.constraints(), model.tolerance());
}

VariationalModel with_entity_order(const VariationalModel& model, std::span<const std::size_t> order) {
  const auto& src = model.entities();
  if (order.size() != src.size()) throw ModelError("entity order is not a permutation");
  std::vector<bool> seen(src.size(), false);
  std::vector<GeometricEntity> entities;
  entities.reserve(src.size());
  for (std::size_t i : order) {
    if (i >= src.size() || seen[i]) throw ModelError("entity order is not a permutation");
    seen[i] = true;
    entities.push_back(src[i]);
  }
  return build_model(std::move(entities), model.constraints(), model.tolerance());
}

}  // namespace gcsa
