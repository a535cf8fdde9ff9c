#pragma once

// Variational model: geometric entities, the constraints defined on them and
// the column layout shared by every matrix built from the model.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace gcsa {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Cross-product matrix: skew(a) * b == a.cross(b).
Mat3 skew(const Vec3& v);

/// Nullity tolerance used when none is configured.
inline constexpr double kDefaultTolerance = 1e-7;

/// Absolute residual threshold (scaled by the constraint value) for a
/// geometry to count as a witness of its constraints.
inline constexpr double kWitnessTolerance = 1e-9;

/// Raised for malformed models: duplicate ids, dangling references, bad
/// orientations, bad size parameters, constraint signature mismatches.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EntityKind { Plane, Line, Cylinder, Sphere, Cone, Torus, Point };

std::string to_string(EntityKind kind);
std::optional<EntityKind> entity_kind_from_string(const std::string& name);

/// True for kinds that carry an axis or normal.
bool has_orientation(EntityKind kind);

/// Number of size parameters a kind carries (radius, half-angle, ...).
std::size_t size_param_count(EntityKind kind);

struct GeometricEntity {
  std::string id;
  EntityKind kind = EntityKind::Plane;
  Vec3 position = Vec3::Zero();
  /// Plane normal or axis direction. Zero for spheres and points.
  Vec3 orientation = Vec3::Zero();
  /// Radius (cylinder, sphere), half-angle (cone), major/minor radius (torus).
  std::vector<double> size_params;
};

/// Position and orientation of one entity. Residuals and Jacobians are
/// evaluated over a span of these, one per entity in model order.
struct Pose {
  Vec3 position = Vec3::Zero();
  Vec3 orientation = Vec3::Zero();
};

enum class ConstraintKind {
  PlanePlaneDistance,
  PlanePlaneAngle,
  PlanePlaneParallel,
  PlanePlanePerpendicular,
  EdgeLength,
  PlaneCylinderDistance,
  PlaneCylinderTangent,
  CylinderCylinderCoaxial,
  PointOnPlane,
  LineLineDistance,
};

std::string to_string(ConstraintKind kind);
std::optional<ConstraintKind> constraint_kind_from_string(const std::string& name);

/// True when the kind takes a value (distance, angle, length).
bool is_dimensional(ConstraintKind kind);

struct Constraint {
  std::string id;
  ConstraintKind kind = ConstraintKind::PlanePlanePerpendicular;
  std::vector<std::string> entity_refs;
  std::optional<double> value;
};

/// Column layout: six screw columns (dt, dr) per entity in entity order,
/// followed by one column per auxiliary scalar in constraint order.
class CoordinateLayout {
 public:
  CoordinateLayout() = default;
  CoordinateLayout(std::size_t entity_count, std::vector<std::size_t> aux_per_constraint);

  std::size_t entity_count() const { return entity_count_; }
  std::size_t aux_count() const { return aux_count_; }
  std::size_t screw_width() const { return 6 * entity_count_; }
  std::size_t width() const { return screw_width() + aux_count_; }

  std::size_t translation_column(std::size_t entity) const { return 6 * entity; }
  std::size_t rotation_column(std::size_t entity) const { return 6 * entity + 3; }
  /// First aux column of the given constraint.
  std::size_t aux_column(std::size_t constraint) const {
    return screw_width() + aux_offset_[constraint];
  }
  std::size_t aux_count_of(std::size_t constraint) const { return aux_per_constraint_[constraint]; }

 private:
  std::size_t entity_count_ = 0;
  std::size_t aux_count_ = 0;
  std::vector<std::size_t> aux_per_constraint_;
  std::vector<std::size_t> aux_offset_;
};

/// Validated, immutable model. Construct with build_model().
class VariationalModel {
 public:
  const std::vector<GeometricEntity>& entities() const { return entities_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  double tolerance() const { return tolerance_; }
  const CoordinateLayout& layout() const { return layout_; }

  std::size_t entity_index(const std::string& id) const;
  std::optional<std::size_t> find_entity(const std::string& id) const;
  std::size_t constraint_index(const std::string& id) const;

  /// Entity indices referenced by constraint `c`, in reference order.
  const std::vector<std::size_t>& constraint_entities(std::size_t c) const {
    return constraint_entities_[c];
  }

  std::vector<Pose> poses() const;

 private:
  friend VariationalModel build_model(std::vector<GeometricEntity>, std::vector<Constraint>, double);

  std::vector<GeometricEntity> entities_;
  std::vector<Constraint> constraints_;
  double tolerance_ = kDefaultTolerance;
  CoordinateLayout layout_;
  std::unordered_map<std::string, std::size_t> entity_lookup_;
  std::unordered_map<std::string, std::size_t> constraint_lookup_;
  std::vector<std::vector<std::size_t>> constraint_entities_;
};

/// Validates entities and constraints and computes the coordinate layout.
/// Orientations within 1e-9 of unit length are re-normalized; anything
/// further off is rejected. Throws ModelError.
VariationalModel build_model(std::vector<GeometricEntity> entities,
                             std::vector<Constraint> constraints,
                             double tolerance = kDefaultTolerance);

struct ConstraintResidual {
  std::string constraint_id;
  double max_abs = 0.0;
  /// Threshold this constraint was held to.
  double threshold = 0.0;
};

struct WitnessReport {
  bool valid = true;
  double max_abs_residual = 0.0;
  std::vector<ConstraintResidual> per_constraint;
  /// Ids of constraints whose residual exceeds their threshold.
  std::vector<std::string> violated;
};

/// Evaluates every constraint at the stored geometry. Never throws for a
/// built model.
WitnessReport validate_witness(const VariationalModel& model);

/// Applies x -> R x + t to every entity (orientations rotate only).
VariationalModel rigidly_transformed(const VariationalModel& model, const Mat3& rotation,
                                     const Vec3& translation);

/// Rebuilds the model with entities in the order given by `order`
/// (a permutation of entity indices). Constraints keep their order.
VariationalModel with_entity_order(const VariationalModel& model,
                                   std::span<const std::size_t> order);

}  // namespace gcsa
