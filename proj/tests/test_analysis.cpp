#include "doctest.h"

#include "gcsa/analysis.hpp"
#include "gcsa/cases.hpp"
#include "gcsa/constraints.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <random>

using namespace gcsa;
using K = ConstraintKind;

namespace {

GeometricEntity plane(const std::string& id, Vec3 p, Vec3 n) { return {id, EntityKind::Plane, p, n, {}}; }
GeometricEntity point(const std::string& id, Vec3 p) { return {id, EntityKind::Point, p, Vec3::Zero(), {}}; }

std::vector<std::vector<std::string>> group_sets(const std::vector<DependencyGroup>& groups) {
  std::vector<std::vector<std::string>> out;
  for (const auto& g : groups) out.push_back(g.constraints);
  return testing::canonical_sets(out);
}

std::vector<std::string> part_ids(const VariationalModel& m, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (std::size_t i : idx) out.push_back(m.entities()[i].id);
  return out;
}

}  // namespace

TEST_CASE("numerical_rank basics") {
  CHECK(numerical_rank(Eigen::Matrix3d::Identity()).rank == 3);
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 2, 4, 6;
  CHECK(numerical_rank(m).rank == 1);
  CHECK(numerical_rank(Eigen::MatrixXd(0, 4)).rank == 0);
  CHECK(numerical_rank(geometric_perturbation_matrix(hexahedron_case().model).matrix).rank == 21);
}

TEST_CASE("numerical_rank agrees with the SVD oracle on random matrices") {
  std::mt19937 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 12);
  for (int t = 0; t < 100; ++t) {
    const int r = dim(rng), c = dim(rng), k = std::min({dim(rng), r, c});
    Eigen::MatrixXd a(r, k), b(k, c);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = n(rng);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = n(rng);
    const Eigen::MatrixXd m = a * b;
    CHECK(numerical_rank(m).rank == testing::svd_rank(m));
  }
}

TEST_CASE("DFLX examples") {
  CHECK(degree_of_flexion(single_plane_case().model) == 0);

  const auto two = build_model({plane("A", {0, 0, 0}, {0, 0, 1}), plane("B", {0, 0, 1}, {0, 0, 1})},
                               {{"D", K::PlanePlaneDistance, {"A", "B"}, 1.0}});
  CHECK(geometric_perturbation_matrix(two).matrix.cols() == 13);
  CHECK(numerical_rank(geometric_perturbation_matrix(two).matrix).rank == 4);
  CHECK(motion_basis_rank(two) == 9);
  CHECK(degree_of_flexion(two) == 0);

  CHECK(degree_of_flexion(slot_case().model) == 3);
  CHECK(motion_basis_rank(slot_case().model) == 30);

  const auto pe = plane_example().model;
  CHECK(free_motion_kernel(pe).cols() == 17);
  CHECK(motion_basis_rank(pe) == 17);
  CHECK(degree_of_flexion(pe) == 0);
}

TEST_CASE("DFLX matches an SVD counting oracle") {
  std::mt19937 rng(23);
  auto oracle = [](const VariationalModel& m) {
    const auto g = geometric_perturbation_matrix(m).matrix;
    return static_cast<long>(g.cols()) - static_cast<long>(testing::svd_rank(g)) -
           static_cast<long>(testing::svd_rank(motion_basis_B(m).matrix));
  };
  for (const auto& name : case_names()) {
    if (name == "bracket") continue;
    CHECK(degree_of_flexion(load_case(name).model) == oracle(load_case(name).model));
  }
  for (int i = 0; i < 50; ++i) {
    const auto m = testing::random_valid_model(rng);
    const long d = degree_of_flexion(m);
    CHECK(d >= 0);
    CHECK(d == oracle(m));
  }
}

TEST_CASE("analysis entry points refuse an invalid witness") {
  const auto br = bracket_case().model;
  CHECK_THROWS_AS(degree_of_flexion(br), AnalysisError);
  CHECK_THROWS_AS(dependency_groups(br), AnalysisError);
  CHECK_THROWS_AS(maximal_rigid_subsystems(br), AnalysisError);
  const auto st = classify(br);
  CHECK(st.inconsistent);
  CHECK(st.over());
  CHECK_FALSE(st.well);
}

TEST_CASE("dependency groups on the fixtures") {
  CHECK(group_sets(dependency_groups(hexahedron_case().model)) ==
        std::vector<std::vector<std::string>>{{"C5", "C6", "C7"}});
  CHECK(dependency_groups(slot_case().model).empty());
  CHECK(dependency_groups(plane_example().model).empty());
}

TEST_CASE("injected redundancy: distance plus parallel on the same pair") {
  const auto m = build_model({plane("A", {0, 0, 0}, {0, 0, 1}), plane("B", {0, 0, 1}, {0, 0, 1})},
                             {{"D", K::PlanePlaneDistance, {"A", "B"}, 1.0},
                              {"P", K::PlanePlaneParallel, {"A", "B"}, {}}});
  CHECK(group_sets(dependency_groups(m)) == std::vector<std::vector<std::string>>{{"D", "P"}});
}

TEST_CASE("dependency vectors lie in Ker(G^T) and need every member") {
  const auto m = hexahedron_case().model;
  const auto g = geometric_perturbation_matrix(m).matrix;
  const auto groups = dependency_groups(m);
  REQUIRE(groups.size() == 1);
  const auto& grp = groups[0];
  CHECK((g.transpose() * grp.coefficients).norm() < 1e-9 * std::max(1.0, g.norm()));

  const auto blocks = translate_all(m);
  const auto owners = row_owners(blocks);
  const std::size_t full_rank = testing::svd_rank(g);
  const long rows = g.rows();

  // Dropping a member constraint removes the deficiency; dropping a
  // non-member keeps it.
  for (std::size_t c = 0; c < m.constraints().size(); ++c) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (owners[static_cast<std::size_t>(r)] != c) keep.push_back(r);
    }
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(keep.size()), g.cols());
    for (std::size_t i = 0; i < keep.size(); ++i) sub.row(static_cast<Eigen::Index>(i)) = g.row(keep[i]);
    const std::size_t r = testing::svd_rank(sub);
    const bool member = std::find(grp.constraints.begin(), grp.constraints.end(), m.constraints()[c].id) !=
                        grp.constraints.end();
    CAPTURE(m.constraints()[c].id);
    if (member) {
      CHECK(r == keep.size());
    } else {
      CHECK(r < keep.size());
    }
    CHECK(r <= full_rank);
  }
}

TEST_CASE("kernel basis is orthonormal and annihilated by G") {
  for (const auto& name : case_names()) {
    if (name == "bracket") continue;
    CAPTURE(name);
    const auto m = load_case(name).model;
    const auto g = geometric_perturbation_matrix(m).matrix;
    const Eigen::MatrixXd k = free_motion_kernel(m);
    CHECK(static_cast<std::size_t>(k.cols()) == m.layout().width() - testing::svd_rank(g));
    CHECK((k.transpose() * k - Eigen::MatrixXd::Identity(k.cols(), k.cols())).norm() < 1e-10);
    if (g.rows()) CHECK((g * k).norm() <= 1e-10 * std::max(1.0, g.norm()) * std::sqrt(double(k.cols())));
  }
  CHECK(free_motion_kernel(single_plane_case().model).cols() == 6);
  CHECK(free_motion_kernel(slot_case().model).cols() == 33);
}

TEST_CASE("kernel is deterministic") {
  const auto m = slot_case().model;
  CHECK(free_motion_kernel(m) == free_motion_kernel(m));
  const auto a = free_motion_sequence(m);
  const auto b = free_motion_sequence(m);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("is_flexion examples") {
  const auto m = slot_case().model;
  const std::size_t f1 = m.entity_index("F1"), f2 = m.entity_index("F2"), f7 = m.entity_index("F7");
  const std::size_t n = m.entities().size();
  const std::vector<std::size_t> p1{f1};

  // Rigid x-translation of everything.
  const Eigen::VectorXd rigid = rigid_motion_basis(n).col(0);
  CHECK_FALSE(is_flexion(m, p1, f7, rigid));

  // Invariant rotation of F7 about its own normal.
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(6 * n));
  inv.segment<6>(static_cast<Eigen::Index>(6 * f7)) = invariant_motion_basis(m.entities()[f7]).col(2);
  CHECK_FALSE(is_flexion(m, p1, f7, inv));

  // Translation of F7 alone along its normal.
  Eigen::VectorXd push = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(6 * n));
  push.segment<3>(static_cast<Eigen::Index>(6 * f7)) = m.entities()[f7].orientation;
  CHECK(is_flexion(m, std::vector<std::size_t>{f2}, f7, push));
  // Against F1 (normal perpendicular to F7's) the same push is a rigid
  // translation of the pair combined with F1's in-plane slide.
  CHECK_FALSE(is_flexion(m, p1, f7, push));
}

TEST_CASE("three points with two distances split as {A,B},{C}") {
  const auto m = build_model({point("A", {0, 0, 0}), point("B", {1, 0, 0}), point("C", {0, 2, 0})},
                             {{"AB", K::EdgeLength, {"A", "B"}, 1.0}, {"AC", K::EdgeLength, {"A", "C"}, 2.0}});
  const auto part = maximal_rigid_subsystems(m);
  REQUIRE(part.parts.size() == 2);
  CHECK(part.parts[0] == std::vector<std::string>{"A", "B"});
  CHECK(part.parts[1] == std::vector<std::string>{"C"});
  REQUIRE(part.bridging.size() == 1);
  CHECK(part.bridging[0].constraint == "AC");
}

TEST_CASE("subdivide_system with a rigid motion keeps one part") {
  const auto m = slot_case().model;
  const std::vector<Eigen::VectorXd> motions{rigid_motion_basis(m.entities().size()).col(4)};
  std::vector<std::size_t> all(m.entities().size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto parts = subdivide_system(m, motions, 0, all);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].size() == all.size());
}

TEST_CASE("maximal rigid subsystems on the fixtures") {
  const auto slot = slot_case().model;
  const auto p = maximal_rigid_subsystems(slot);
  std::vector<std::vector<std::string>> got;
  for (const auto& idx : p.part_indices) got.push_back(part_ids(slot, idx));
  CHECK(testing::canonical_sets(got) ==
        testing::canonical_sets({{"F1", "F2", "F3", "F4", "F5", "F8", "F10"}, {"F7"}}));
  CHECK(p.bridging.empty());

  const auto hex = maximal_rigid_subsystems(hexahedron_case().model);
  CHECK(hex.parts.size() == 1);
  CHECK(hex.parts[0].size() == 8);
}

TEST_CASE("partition parts are rigid under every kernel motion") {
  for (const auto& name : {"slot", "hexahedron", "line_example", "plane_example"}) {
    CAPTURE(name);
    const auto m = load_case(name).model;
    const auto part = maximal_rigid_subsystems(m);
    const auto motions = free_motion_sequence(m);
    for (const auto& idx : part.part_indices) {
      for (const auto& v : motions) {
        for (std::size_t k = 1; k < idx.size(); ++k) {
          const std::vector<std::size_t> rest(idx.begin(), idx.begin() + static_cast<long>(k));
          CHECK_FALSE(is_flexion(m, rest, idx[k], v));
        }
      }
    }
    // Disjoint cover.
    std::vector<int> seen(m.entities().size(), 0);
    for (const auto& idx : part.part_indices) {
      CHECK_FALSE(idx.empty());
      for (std::size_t i : idx) ++seen[i];
    }
    for (int s : seen) CHECK(s == 1);
  }
}

TEST_CASE("classification of the fixtures") {
  const auto hex = classify(hexahedron_case().model);
  CHECK(hex.over_consistent);
  CHECK_FALSE(hex.under);
  CHECK_FALSE(hex.well);
  CHECK(hex.dflx == 0);

  const auto slot = classify(slot_case().model);
  CHECK(slot.under);
  CHECK_FALSE(slot.over());

  const auto pe = classify(plane_example().model);
  CHECK(pe.well);
}

TEST_CASE("fixture expectations hold") {
  for (const auto& name : case_names()) {
    CAPTURE(name);
    const auto fx = load_case(name);
    CHECK(eval_residuals(fx.model).size() == static_cast<Eigen::Index>(fx.expected.equation_count));
    if (!fx.available) continue;
    const auto rep = analyze(fx.model);
    const auto& x = fx.expected;
    if (x.well) CHECK(rep.state.well == *x.well);
    if (x.under) CHECK(rep.state.under == *x.under);
    if (x.over) CHECK(rep.state.over() == *x.over);
    if (x.dflx) CHECK(rep.state.dflx == *x.dflx);
    if (x.rank_b) CHECK(rep.state.rank_b == *x.rank_b);
    if (x.kernel_dim) CHECK(rep.state.columns - rep.state.rank_g == *x.kernel_dim);
    if (x.groups) CHECK(group_sets(rep.groups) == testing::canonical_sets(*x.groups));
    REQUIRE(rep.partition);
    if (x.partition) CHECK(testing::canonical_sets(rep.partition->parts) == testing::canonical_sets(*x.partition));
    if (x.bridging_count) CHECK(rep.partition->bridging.size() == *x.bridging_count);
  }
}

TEST_CASE("fixture expectations are frame and order invariant") {
  std::mt19937 rng(31);
  for (const auto& name : case_names()) {
    const auto fx = load_case(name);
    if (!fx.available) continue;
    CAPTURE(name);
    const auto base = analyze(fx.model);
    auto sizes = [](const RigidPartition& p) {
      std::vector<std::size_t> s;
      for (const auto& part : p.parts) s.push_back(part.size());
      std::sort(s.begin(), s.end());
      return s;
    };
    for (int i = 0; i < 20; ++i) {
      const auto moved = rigidly_transformed(fx.model, testing::random_rotation(rng),
                                             Vec3(std::normal_distribution<double>(0, 30)(rng), 5, -7));
      const auto perm = testing::random_permutation(fx.model.entities().size(), rng);
      for (const auto& m : {moved, with_entity_order(fx.model, perm)}) {
        const auto rep = analyze(m);
        CHECK(rep.state.well == base.state.well);
        CHECK(rep.state.under == base.state.under);
        CHECK(rep.state.over_consistent == base.state.over_consistent);
        CHECK(rep.state.dflx == base.state.dflx);
        CHECK(rep.state.rank_g == base.state.rank_g);
        CHECK(group_sets(rep.groups) == group_sets(base.groups));
        CHECK(sizes(*rep.partition) == sizes(*base.partition));
      }
    }
  }
}
