#include "doctest.h"

#include "gcsa/cases.hpp"
#include "gcsa/constraints.hpp"
#include "gcsa/model.hpp"
#include "oracles.hpp"

#include <random>

using namespace gcsa;

namespace {

GeometricEntity plane(const std::string& id, Vec3 p, Vec3 n) { return {id, EntityKind::Plane, p, n, {}}; }

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ModelError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("single plane gives a 6-wide layout") {
  const auto m = build_model({plane("F1", {0, 0, 0}, {0, 0, 1})}, {});
  CHECK(m.layout().width() == 6);
  CHECK(m.layout().aux_count() == 0);
}

TEST_CASE("hexahedron layout is 6*8 + 3 aux") {
  const auto fx = hexahedron_case();
  CHECK(fx.model.entities().size() == 8);
  CHECK(fx.model.constraints().size() == 14);
  CHECK(fx.model.layout().width() == 51);
  std::size_t aux = 0;
  for (const auto& b : translate_all(fx.model)) aux += b.aux_count();
  CHECK(aux == fx.model.layout().aux_count());
}

TEST_CASE("layout columns are a bijection") {
  const auto fx = hexahedron_case();
  const auto& L = fx.model.layout();
  std::vector<int> hit(L.width(), 0);
  for (std::size_t e = 0; e < fx.model.entities().size(); ++e) {
    for (int k = 0; k < 3; ++k) {
      ++hit[L.translation_column(e) + static_cast<std::size_t>(k)];
      ++hit[L.rotation_column(e) + static_cast<std::size_t>(k)];
    }
  }
  for (std::size_t c = 0; c < fx.model.constraints().size(); ++c) {
    for (std::size_t a = 0; a < L.aux_count_of(c); ++a) ++hit[L.aux_column(c) + a];
  }
  for (int h : hit) CHECK(h == 1);
}

TEST_CASE("build_model rejects malformed input") {
  const auto p1 = plane("F1", {0, 0, 0}, {0, 0, 1});
  const auto p2 = plane("F2", {0, 0, 1}, {0, 0, 1});
  using K = ConstraintKind;

  CHECK(error_of([] { build_model({}, {}); }).find("no entities") != std::string::npos);
  CHECK(error_of([&] { build_model({p1}, {}, 0.0); }).find("tolerance") != std::string::npos);
  CHECK(error_of([&] { build_model({p1, p1}, {}); }).find("duplicate entity") != std::string::npos);
  CHECK(error_of([&] { build_model({p1, p2}, {{"C1", K::PlanePlaneParallel, {"F1", "F99"}, {}}}); })
            .find("dangling reference") != std::string::npos);
  CHECK(error_of([&] { build_model({plane("F1", {0, 0, 0}, {0, 0, 1.001})}, {}); }).find("unit") !=
        std::string::npos);
  CHECK(error_of([&] {
          build_model({{"V", EntityKind::Point, {0, 0, 0}, {0, 0, 1}, {}}}, {});
        }).find("no orientation") != std::string::npos);
  CHECK(error_of([&] {
          build_model({{"A", EntityKind::Cylinder, {0, 0, 0}, {0, 0, 1}, {-1.0}}}, {});
        }).find("positive") != std::string::npos);
  CHECK(error_of([&] {
          build_model({{"A", EntityKind::Cylinder, {0, 0, 0}, {0, 0, 1}, {}}}, {});
        }).find("size parameter") != std::string::npos);
  CHECK(error_of([&] { build_model({p1, p2}, {{"C1", K::PlanePlaneDistance, {"F1", "F2"}, {}}}); })
            .find("requires a value") != std::string::npos);
  CHECK(error_of([&] { build_model({p1, p2}, {{"C1", K::PlanePlaneParallel, {"F1", "F2"}, 1.0}}); })
            .find("takes no value") != std::string::npos);
  CHECK(error_of([&] { build_model({p1, p2}, {{"C1", K::PlanePlaneParallel, {"F1", "F1"}, {}}, {"C1", K::PlanePlaneParallel, {"F1", "F2"}, {}}}); })
            .find("duplicate constraint") != std::string::npos);
}

TEST_CASE("orientation within 1e-9 of unit is renormalized") {
  const auto m = build_model({plane("F1", {0, 0, 0}, {0, 0, 1.0 + 5e-10})}, {});
  CHECK(m.entities()[0].orientation.norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("validate_witness on two planes at distance 1") {
  using K = ConstraintKind;
  const auto a = plane("F1", {0, 0, 0}, {0, 0, 1});
  const auto b = plane("F2", {0, 0, 1}, {0, 0, 1});

  const auto ok = validate_witness(build_model({a, b}, {{"D", K::PlanePlaneDistance, {"F1", "F2"}, 1.0}}));
  CHECK(ok.valid);
  CHECK(ok.max_abs_residual == 0.0);

  const auto bad = validate_witness(build_model({a, b}, {{"D", K::PlanePlaneDistance, {"F1", "F2"}, 2.0}}));
  CHECK_FALSE(bad.valid);
  CHECK(bad.max_abs_residual == doctest::Approx(1.0));
  REQUIRE(bad.violated.size() == 1);
  CHECK(bad.violated[0] == "D");
}

TEST_CASE("fixture witnesses are valid except the bracket") {
  for (const auto& name : case_names()) {
    CAPTURE(name);
    const auto fx = load_case(name);
    const auto w = validate_witness(fx.model);
    if (name == "bracket") {
      CHECK_FALSE(w.valid);
      CHECK(w.violated == std::vector<std::string>{"C14"});
      CHECK_FALSE(fx.available);
    } else {
      CHECK(w.valid);
      CHECK(w.max_abs_residual < 1e-9);
      CHECK(fx.available);
    }
  }
}

TEST_CASE("validate_witness is frame independent") {
  std::mt19937 rng(7);
  for (const auto& name : case_names()) {
    const auto fx = load_case(name);
    const auto base = validate_witness(fx.model);
    for (int i = 0; i < 5; ++i) {
      const auto moved =
          validate_witness(rigidly_transformed(fx.model, testing::random_rotation(rng), Vec3(3, -4, 11)));
      CHECK(moved.valid == base.valid);
      for (std::size_t c = 0; c < base.per_constraint.size(); ++c) {
        CHECK(std::abs(moved.per_constraint[c].max_abs - base.per_constraint[c].max_abs) < 1e-9);
      }
    }
  }
}

TEST_CASE("with_entity_order permutes and rejects non-permutations") {
  const auto fx = slot_case();
  const std::vector<std::size_t> order{7, 6, 5, 4, 3, 2, 1, 0};
  const auto m = with_entity_order(fx.model, order);
  CHECK(m.entities()[0].id == "F10");
  CHECK(validate_witness(m).valid);
  const std::vector<std::size_t> bad{0, 0, 1, 2, 3, 4, 5, 6};
  CHECK_THROWS_AS(with_entity_order(fx.model, bad), ModelError);
}
