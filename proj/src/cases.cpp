#include "gcsa/cases.hpp"

#include "gcsa/analysis.hpp"
#include "gcsa/constraints.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace gcsa {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

GeometricEntity plane(std::string id, Vec3 p, Vec3 n) {
  return {std::move(id), EntityKind::Plane, p, n.normalized(), {}};
}

GeometricEntity cylinder(std::string id, Vec3 p, Vec3 d, double r) {
  return {std::move(id), EntityKind::Cylinder, p, d.normalized(), {r}};
}

GeometricEntity line(std::string id, Vec3 p, Vec3 d) {
  return {std::move(id), EntityKind::Line, p, d.normalized(), {}};
}

GeometricEntity point(std::string id, Vec3 p) {
  return {std::move(id), EntityKind::Point, p, Vec3::Zero(), {}};
}

Constraint con(std::string id, ConstraintKind kind, std::vector<std::string> refs,
               std::optional<double> value = std::nullopt) {
  return {std::move(id), kind, std::move(refs), value};
}

// Unit vector in the xz-plane at `deg` degrees from +x towards +z.
Vec3 xz(double deg) { return {std::cos(deg * kDeg), 0.0, std::sin(deg * kDeg)}; }

std::size_t equations_of(const VariationalModel& model) {
  std::size_t n = 0;
  for (const auto& c : model.constraints()) n += row_count(c.kind);
  return n;
}

void finish(CaseFixture& fx) {
  fx.expected.equation_count = equations_of(fx.model);
  if (fx.expected.listed_equation_count == 0) fx.expected.listed_equation_count = fx.expected.equation_count;
  const WitnessReport w = validate_witness(fx.model);
  fx.available = w.valid;
  if (!w.valid) {
    fx.unavailable_reason = "constructed geometry violates";
    for (const auto& id : w.violated) fx.unavailable_reason += " " + id;
  }
}

}  // namespace

CaseFixture hexahedron_case() {
  using K = ConstraintKind;
  std::vector<GeometricEntity> e{
      plane("F1", {0, 0, 0}, {-1, 0, 0}), plane("F2", {0, 0, 0}, {0, -1, 0}),
      plane("F3", {1, 0, 0}, {1, 0, 0}),  plane("F4", {0, 1, 0}, {0, 1, 0}),
      plane("F5", {0, 0, 0}, {0, 0, -1}), plane("F6", {0, 0, 1}, {0, 0, 1}),
      point("V1", {0, 0, 0}),             point("V2", {0, 1, 0}),
  };
  std::vector<Constraint> c{
      con("C1", K::PlanePlaneDistance, {"F1", "F3"}, 1.0),
      con("C2", K::PlanePlaneDistance, {"F5", "F6"}, 1.0),
      con("C3", K::PlanePlanePerpendicular, {"F1", "F5"}),
      con("C4", K::PlanePlanePerpendicular, {"F1", "F4"}),
      con("C5", K::PlanePlanePerpendicular, {"F4", "F5"}),
      con("C6", K::PlanePlaneParallel, {"F2", "F4"}),
      con("C7", K::PlanePlanePerpendicular, {"F2", "F5"}),
      con("C8", K::EdgeLength, {"V1", "V2"}, 1.0),
      // E1 = F1 ∩ F5, bounded by F2 and F4.
      con("I1", K::PointOnPlane, {"V1", "F1"}),
      con("I2", K::PointOnPlane, {"V1", "F5"}),
      con("I3", K::PointOnPlane, {"V1", "F2"}),
      con("I4", K::PointOnPlane, {"V2", "F1"}),
      con("I5", K::PointOnPlane, {"V2", "F5"}),
      con("I6", K::PointOnPlane, {"V2", "F4"}),
  };
  CaseFixture fx{"hexahedron", build_model(std::move(e), std::move(c)), {}, true, {}};
  auto& x = fx.expected;
  x.well = false;
  x.under = false;
  x.over = true;
  x.dflx = 0;
  x.groups = std::vector<std::vector<std::string>>{{"C5", "C6", "C7"}};
  x.partition = std::vector<std::vector<std::string>>{{"F1", "F2", "F3", "F4", "F5", "F6", "V1", "V2"}};
  x.bridging_count = 0;
  x.listed_equation_count = 16;
  x.notes = {"C6 carries the F4-F5 perpendicularity of C5 over to F2-F5, which C7 states again."};
  finish(fx);
  return fx;
}

CaseFixture slot_case() {
  using K = ConstraintKind;
  std::vector<GeometricEntity> e{
      plane("F1", {0, 0, 0}, {-1, 0, 0}), plane("F2", {0, 0, 0}, {0, -1, 0}),
      plane("F3", {10, 0, 0}, {1, 0, 0}), plane("F4", {0, 15, 0}, {0, 1, 0}),
      plane("F5", {0, 0, 0}, {0, 0, -1}), plane("F7", {5, 10, 7.5}, {0, -1, 0}),
      plane("F8", {0, 0, 5}, {0, 0, 1}),  plane("F10", {0, 0, 10}, {0, 0, 1}),
  };
  std::vector<Constraint> c{
      con("C1", K::PlanePlaneDistance, {"F1", "F3"}, 10.0),
      con("C2", K::PlanePlaneDistance, {"F2", "F4"}, 15.0),
      con("C3", K::PlanePlaneDistance, {"F5", "F10"}, 10.0),
      con("C5", K::PlanePlanePerpendicular, {"F1", "F2"}),
      con("C6", K::PlanePlanePerpendicular, {"F1", "F10"}),
      con("C7", K::PlanePlanePerpendicular, {"F2", "F10"}),
      con("C10", K::PlanePlaneDistance, {"F5", "F8"}, 5.0),
  };
  CaseFixture fx{"slot", build_model(std::move(e), std::move(c)), {}, true, {}};
  auto& x = fx.expected;
  x.well = false;
  x.under = true;
  x.over = false;
  x.dflx = 3;
  x.groups = std::vector<std::vector<std::string>>{};
  x.partition = std::vector<std::vector<std::string>>{{"F1", "F10", "F2", "F3", "F4", "F5", "F8"}, {"F7"}};
  x.bridging_count = 0;
  x.notes = {"F7 lost its constraints in the edit and floats freely."};
  finish(fx);
  return fx;
}

CaseFixture bracket_case() {
  using K = ConstraintKind;
  const Vec3 y{0, 1, 0};
  const Vec3 n6 = xz(250.0);
  const Vec3 n13{0, -1, 0};
  const double s60 = std::sqrt(3.0) / 2.0;

  const Vec3 p4{30, 0, 40}, n4 = xz(150.0);
  const Vec3 p22{40, 0, 60}, n22 = xz(120.0);
  const Vec3 p8{150, 0, 40}, n8 = xz(30.0);
  const Vec3 p30{140, 0, 60}, n30 = xz(60.0);
  const Vec3 p6{90, 0, 50};
  const Vec3 p11{100, 0, 70}, n11 = xz(50.0);

  const Vec3 d19 = n6.cross(y).normalized();
  const Vec3 p19 = p6 - 10.62 * n6 + 57.96 * y;
  const Vec3 p28 = p6 + 10.62 * n6 + 57.96 * y;
  const Vec3 n23 = 0.5 * n13 + s60 * n6;
  const Vec3 n29 = 0.5 * n13 - s60 * n6;
  const Vec3 z{0, 0, 1};

  std::vector<GeometricEntity> e{
      plane("F1", {0, 0, 0}, {-1, 0, 0}),
      plane("F2", {0, 0, 0}, {0, 0, -1}),
      plane("F3", {0, 0, 10}, {0, 0, 1}),
      plane("F4", p4, n4),
      plane("F5", p4 + 10 * n4, n4),
      plane("F6", p6, n6),
      plane("F7", p6 + 10 * n6, n6),
      plane("F8", p8, n8),
      plane("F9", p8 + 10 * n8, n8),
      plane("F10", p11 - 10 * n11, n11),
      plane("F11", p11, n11),
      plane("F12", {180, 0, 0}, {1, 0, 0}),
      plane("F13", {0, 0, 0}, n13),
      plane("F14", {0, 80, 0}, y),
      cylinder("F15", {10, 20, 0}, z, 5),
      cylinder("F16", {10, 60, 0}, z, 5),
      cylinder("F17", {170, 20, 0}, z, 5),
      cylinder("F18", {170, 60, 0}, z, 5),
      cylinder("F19", p19, d19, 8),
      plane("F20", p19 + 8 * y, y),
      cylinder("F21", p19 + 5 * d19, d19, 12),
      plane("F22", p22, n22),
      plane("F23", p19 + 8 * n23, n23),
      plane("F24", p22 + 10 * n22, n22),
      plane("F25", p28 + 8 * y, y),
      cylinder("F26", p28 - 5 * d19, d19, 12),
      plane("F27", p30 + 10 * n30, n30),
      cylinder("F28", p28, d19, 8),
      plane("F29", p28 + 8 * n29, n29),
      plane("F30", p30, n30),
  };
  std::vector<Constraint> c{
      con("C1", K::PlanePlaneDistance, {"F2", "F3"}, 10.0),
      con("C2", K::PlanePlaneDistance, {"F4", "F5"}, 10.0),
      con("C3", K::PlanePlaneDistance, {"F6", "F7"}, 10.0),
      con("C4", K::PlanePlaneDistance, {"F8", "F9"}, 10.0),
      con("C5", K::PlanePlaneDistance, {"F10", "F11"}, 10.0),
      con("C6", K::PlanePlaneAngle, {"F1", "F4"}, 30.0 * kDeg),
      con("C7", K::PlanePlaneAngle, {"F1", "F8"}, 150.0 * kDeg),
      con("C8", K::PlanePlaneDistance, {"F1", "F12"}, 180.0),
      con("C9", K::PlanePlaneDistance, {"F13", "F14"}, 80.0),
      con("C10", K::PlanePlaneAngle, {"F3", "F6"}, 160.0 * kDeg),
      con("C11", K::PlanePlaneAngle, {"F6", "F11"}, 160.0 * kDeg),
      con("C12", K::PlanePlanePerpendicular, {"F1", "F3"}),
      con("C13", K::PlanePlanePerpendicular, {"F1", "F2"}),
      con("C14", K::PlanePlanePerpendicular, {"F2", "F3"}),
      con("C15", K::PlaneCylinderDistance, {"F6", "F19"}, 10.62),
      con("C16", K::PlaneCylinderDistance, {"F13", "F19"}, 57.96),
      con("C17", K::CylinderCylinderCoaxial, {"F19", "F21"}),
      con("C18", K::PlaneCylinderTangent, {"F20", "F19"}),
      con("C19", K::PlaneCylinderTangent, {"F23", "F19"}),
      con("C20", K::PlanePlaneParallel, {"F20", "F14"}),
      con("C21", K::PlanePlaneAngle, {"F23", "F13"}, 60.0 * kDeg),
      con("C22", K::PlanePlaneAngle, {"F4", "F22"}, 30.0 * kDeg),
      con("C23", K::PlanePlaneDistance, {"F22", "F24"}, 10.0),
      con("C24", K::PlaneCylinderDistance, {"F6", "F28"}, 10.62),
      con("C25", K::PlaneCylinderDistance, {"F13", "F28"}, 57.96),
      con("C26", K::CylinderCylinderCoaxial, {"F28", "F26"}),
      con("C27", K::PlaneCylinderTangent, {"F29", "F28"}),
      con("C28", K::PlaneCylinderTangent, {"F25", "F28"}),
      con("C29", K::PlanePlaneParallel, {"F25", "F14"}),
      con("C30", K::PlanePlaneAngle, {"F29", "F13"}, 60.0 * kDeg),
      con("C31", K::PlanePlaneAngle, {"F8", "F30"}, 30.0 * kDeg),
      con("C32", K::PlanePlaneDistance, {"F27", "F30"}, 10.0),
      con("C33", K::PlaneCylinderDistance, {"F1", "F15"}, 10.0),
      con("C34", K::PlaneCylinderDistance, {"F13", "F15"}, 20.0),
      con("C35", K::PlaneCylinderDistance, {"F1", "F16"}, 10.0),
      con("C36", K::PlaneCylinderDistance, {"F14", "F16"}, 20.0),
      con("C37", K::PlaneCylinderDistance, {"F12", "F17"}, 10.0),
      con("C38", K::PlaneCylinderDistance, {"F13", "F17"}, 20.0),
      con("C39", K::PlaneCylinderDistance, {"F12", "F18"}, 10.0),
      con("C40", K::PlaneCylinderDistance, {"F14", "F18"}, 20.0),
  };
  CaseFixture fx{"bracket", build_model(std::move(e), std::move(c)), {}, true, {}};
  auto& x = fx.expected;
  x.well = false;
  x.under = true;
  x.over = true;
  x.groups = std::vector<std::vector<std::string>>{{"C16", "C18", "C20", "C9"}, {"C25", "C28", "C29", "C9"}};
  x.bridging_count = 14;
  x.notes = {"C1 (F2 at distance 10 from F3) and C14 (F2 perpendicular to F3) cannot hold together."};
  finish(fx);
  return fx;
}

CaseFixture plane_example() {
  using K = ConstraintKind;
  std::vector<GeometricEntity> e{
      plane("F1", {0, 0, 0}, {-1, 0, 0}),
      plane("F2", {0, 0, 0}, {0, -1, 0}),
      plane("F3", {20, 0, 0}, {1, 0, 0}),
      plane("F4", {0, 10, 0}, {0, 1, 0}),
  };
  std::vector<Constraint> c{
      con("C1", K::PlanePlaneDistance, {"F1", "F3"}, 20.0),
      con("C2", K::PlanePlaneDistance, {"F2", "F4"}, 10.0),
      con("C3", K::PlanePlanePerpendicular, {"F1", "F2"}),
  };
  CaseFixture fx{"plane_example", build_model(std::move(e), std::move(c)), {}, true, {}};
  auto& x = fx.expected;
  x.well = true;
  x.under = false;
  x.over = false;
  x.dflx = 0;
  x.rank_b = 17;
  x.kernel_dim = 17;
  x.groups = std::vector<std::vector<std::string>>{};
  x.partition = std::vector<std::vector<std::string>>{{"F1", "F2", "F3", "F4"}};
  finish(fx);
  return fx;
}

CaseFixture line_example() {
  std::vector<GeometricEntity> e{
      line("L1", {0, 0, 0}, {1, 0, 0}),
      line("L2", {0, 0, 10}, {0, 1, 0}),
  };
  std::vector<Constraint> c{con("C1", ConstraintKind::LineLineDistance, {"L1", "L2"}, 10.0)};
  CaseFixture fx{"line_example", build_model(std::move(e), std::move(c)), {}, true, {}};
  auto& x = fx.expected;
  // Two lines have 2 relative DOF; one distance leaves the crossing angle free.
  x.well = false;
  x.under = true;
  x.over = false;
  x.dflx = 1;
  x.groups = std::vector<std::vector<std::string>>{};
  x.partition = std::vector<std::vector<std::string>>{{"L1"}, {"L2"}};
  x.bridging_count = 1;
  finish(fx);
  return fx;
}

CaseFixture single_plane_case() {
  std::vector<GeometricEntity> e{plane("F1", {0, 0, 0}, {0, 0, 1})};
  CaseFixture fx{"single_plane", build_model(std::move(e), {}), {}, true, {}};
  auto& x = fx.expected;
  x.well = true;
  x.under = false;
  x.over = false;
  x.dflx = 0;
  x.rank_b = 6;
  x.kernel_dim = 6;
  x.groups = std::vector<std::vector<std::string>>{};
  x.partition = std::vector<std::vector<std::string>>{{"F1"}};
  finish(fx);
  return fx;
}

std::vector<std::string> case_names() {
  return {"bracket", "hexahedron", "line_example", "plane_example", "single_plane", "slot"};
}

CaseFixture load_case(const std::string& name) {
  if (name == "hexahedron") return hexahedron_case();
  if (name == "slot") return slot_case();
  if (name == "bracket") return bracket_case();
  if (name == "plane_example") return plane_example();
  if (name == "line_example") return line_example();
  if (name == "single_plane") return single_plane_case();
  throw ModelError("unknown case '" + name + "'");
}

ParametricModel standard_parametric(const VariationalModel& model) {
  const auto& ents = model.entities();
  // Map from compact variable index to column of the catalog Jacobian.
  std::vector<Eigen::Index> cols;
  std::vector<std::size_t> oriented;
  for (std::size_t i = 0; i < ents.size(); ++i) {
    for (int k = 0; k < 3; ++k) cols.push_back(static_cast<Eigen::Index>(6 * i + k));
    if (has_orientation(ents[i].kind)) {
      oriented.push_back(i);
      for (int k = 3; k < 6; ++k) cols.push_back(static_cast<Eigen::Index>(6 * i + k));
    }
  }
  const std::size_t screw = model.layout().screw_width();
  for (std::size_t a = 0; a < model.layout().aux_count(); ++a) cols.push_back(static_cast<Eigen::Index>(screw + a));

  const std::vector<EquationBlock> blocks = translate_all(model);
  const std::size_t catalog_rows = row_offsets(blocks).back();
  const std::size_t n_vars = cols.size();
  const std::size_t n_aux = model.layout().aux_count();

  Eigen::VectorXd x0(static_cast<Eigen::Index>(n_vars));
  {
    const Eigen::VectorXd aux = witness_aux(model, blocks);
    Eigen::Index k = 0;
    for (const auto& e : ents) {
      x0.segment<3>(k) = e.position;
      k += 3;
      if (has_orientation(e.kind)) {
        x0.segment<3>(k) = e.orientation;
        k += 3;
      }
    }
    x0.tail(static_cast<Eigen::Index>(n_aux)) = aux;
  }

  // Unpacks x into poses and aux; orientation slots keep their raw values.
  auto unpack = [ents, n_aux](const Eigen::VectorXd& x) {
    std::vector<Pose> poses(ents.size());
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < ents.size(); ++i) {
      poses[i].position = x.segment<3>(k);
      k += 3;
      if (has_orientation(ents[i].kind)) {
        poses[i].orientation = x.segment<3>(k);
        k += 3;
      }
    }
    return std::make_pair(poses, Eigen::VectorXd(x.tail(static_cast<Eigen::Index>(n_aux))));
  };

  ParametricModel pm;
  pm.name = "standard";
  pm.variables = x0;
  pm.aux_count = n_aux;
  pm.equation_count = catalog_rows + oriented.size();
  pm.residuals = [model, blocks, unpack, oriented, catalog_rows](const Eigen::VectorXd& x) {
    auto [poses, aux] = unpack(x);
    Eigen::VectorXd f(static_cast<Eigen::Index>(catalog_rows + oriented.size()));
    f.head(static_cast<Eigen::Index>(catalog_rows)) = eval_residuals(model, blocks, poses, aux);
    for (std::size_t j = 0; j < oriented.size(); ++j) {
      f(static_cast<Eigen::Index>(catalog_rows + j)) = poses[oriented[j]].orientation.squaredNorm() - 1.0;
    }
    return f;
  };
  pm.jacobian = [model, blocks, unpack, oriented, catalog_rows, cols](const Eigen::VectorXd& x) {
    auto [poses, aux] = unpack(x);
    const Eigen::MatrixXd full = parametric_jacobian(model, blocks, poses, aux);
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(catalog_rows + oriented.size()),
                                              static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      j.block(0, static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(catalog_rows), 1) = full.col(cols[k]);
    }
    for (std::size_t r = 0; r < oriented.size(); ++r) {
      const std::size_t e = oriented[r];
      // Column of n_e in the compact layout.
      for (std::size_t k = 0; k < cols.size(); ++k) {
        if (cols[k] == static_cast<Eigen::Index>(6 * e + 3)) {
          j.block<1, 3>(static_cast<Eigen::Index>(catalog_rows + r), static_cast<Eigen::Index>(k)) =
              2.0 * poses[e].orientation.transpose();
          break;
        }
      }
    }
    return j;
  };
  return pm;
}

namespace {

// Plane example with every plane as (a, b, c, d), a x + b y + c z + d = 0.
// Variables: 16 plane coefficients then t13, t24 (n1 = -t13 n3, n2 = -t24 n4).
ParametricModel tuple_plane_example() {
  const CaseFixture fx = plane_example();
  const auto& ents = fx.model.entities();
  Eigen::VectorXd x0(18);
  for (int i = 0; i < 4; ++i) {
    const auto& e = ents[static_cast<std::size_t>(i)];
    x0.segment<3>(4 * i) = e.orientation;
    x0(4 * i + 3) = -e.orientation.dot(e.position);
  }
  x0(16) = -ents[0].orientation.dot(ents[2].orientation);
  x0(17) = -ents[1].orientation.dot(ents[3].orientation);

  const double l13 = *fx.model.constraints()[0].value;
  const double l24 = *fx.model.constraints()[1].value;
  // Signed distance along n_a from plane a to plane b is d_a + t d_b.
  const double s13 = (x0(3) + x0(16) * x0(11)) >= 0 ? 1.0 : -1.0;
  const double s24 = (x0(7) + x0(17) * x0(15)) >= 0 ? 1.0 : -1.0;

  constexpr int kRows = 4 + 4 + 4 + 1;
  ParametricModel pm;
  pm.name = "tuple";
  pm.variables = x0;
  pm.aux_count = 2;
  pm.equation_count = kRows;
  pm.residuals = [=](const Eigen::VectorXd& x) {
    Eigen::VectorXd f(kRows);
    for (int i = 0; i < 4; ++i) f(i) = x.segment<3>(4 * i).squaredNorm() - 1.0;
    f.segment<3>(4) = x.segment<3>(0) + x(16) * x.segment<3>(8);
    f(7) = x(3) + x(16) * x(11) - s13 * l13;
    f.segment<3>(8) = x.segment<3>(4) + x(17) * x.segment<3>(12);
    f(11) = x(7) + x(17) * x(15) - s24 * l24;
    f(12) = x.segment<3>(0).dot(x.segment<3>(4));
    return f;
  };
  pm.jacobian = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(kRows, 18);
    for (int i = 0; i < 4; ++i) j.block<1, 3>(i, 4 * i) = 2.0 * x.segment<3>(4 * i).transpose();
    j.block<3, 3>(4, 0) = Eigen::Matrix3d::Identity();
    j.block<3, 3>(4, 8) = x(16) * Eigen::Matrix3d::Identity();
    j.block<3, 1>(4, 16) = x.segment<3>(8);
    j(7, 3) = 1.0;
    j(7, 11) = x(16);
    j(7, 16) = x(11);
    j.block<3, 3>(8, 4) = Eigen::Matrix3d::Identity();
    j.block<3, 3>(8, 12) = x(17) * Eigen::Matrix3d::Identity();
    j.block<3, 1>(8, 17) = x.segment<3>(12);
    j(11, 7) = 1.0;
    j(11, 15) = x(17);
    j(11, 17) = x(15);
    j.block<1, 3>(12, 0) = x.segment<3>(4).transpose();
    j.block<1, 3>(12, 4) = x.segment<3>(0).transpose();
    return j;
  };
  return pm;
}

}  // namespace

ParametricModel plane_example_parametric(PlaneScheme scheme) {
  if (scheme == PlaneScheme::Tuple) return tuple_plane_example();
  return standard_parametric(plane_example().model);
}

std::size_t witness_parametric_dof(const ParametricModel& model, double tol) {
  const Eigen::VectorXd f = model.residuals(model.variables);
  const double worst = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
  if (worst > 1e-9) throw AnalysisError(model.name + ": variables are not a witness (residual " +
                                        std::to_string(worst) + ")");
  const Eigen::MatrixXd j = model.jacobian(model.variables);
  return static_cast<std::size_t>(model.variables.size()) - numerical_rank(j, tol).rank;
}

}  // namespace gcsa
