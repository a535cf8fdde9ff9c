#include "gcsa/analysis.hpp"

#include "gcsa/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace gcsa {

namespace {

void require_witness(const VariationalModel& model) {
  const WitnessReport witness = validate_witness(model);
  if (witness.valid) return;
  std::string msg = "invalid witness: max residual " + std::to_string(witness.max_abs_residual) + " on";
  for (const auto& id : witness.violated) msg += " " + id;
  throw AnalysisError(msg);
}

std::size_t rank_of(const Eigen::MatrixXd& m, double tol) { return numerical_rank(m, tol).rank; }

/// First entry with magnitude above `floor` made positive.
void canonical_sign(Eigen::Ref<Eigen::VectorXd> v, double floor = 1e-9) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > floor) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

RankResult numerical_rank(const Eigen::MatrixXd& matrix, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("rank tolerance must be positive");
  RankResult result;
  if (matrix.rows() == 0 || matrix.cols() == 0) return result;
  result.qr.compute(matrix);
  const Eigen::MatrixXd& packed = result.qr.matrixQR();
  const Eigen::Index diag = std::min(packed.rows(), packed.cols());
  const double threshold = tol * std::max(1.0, std::abs(packed(0, 0)));
  for (Eigen::Index i = 0; i < diag; ++i) {
    if (std::abs(packed(i, i)) > threshold) ++result.rank;
  }
  return result;
}

std::size_t RigidPartition::bridges_between(std::size_t a, std::size_t b) const {
  return static_cast<std::size_t>(std::count_if(bridging.begin(), bridging.end(), [&](const Bridge& br) {
    return std::find(br.parts.begin(), br.parts.end(), a) != br.parts.end() &&
           std::find(br.parts.begin(), br.parts.end(), b) != br.parts.end();
  }));
}

std::size_t motion_basis_rank(const VariationalModel& model) {
  return rank_of(motion_basis_B(model).matrix, model.tolerance());
}

long degree_of_flexion(const VariationalModel& model) {
  require_witness(model);
  const auto g = geometric_perturbation_matrix(model);
  const long dflx = static_cast<long>(g.matrix.cols()) - static_cast<long>(rank_of(g.matrix, model.tolerance())) -
                    static_cast<long>(motion_basis_rank(model));
  if (dflx < 0) throw std::logic_error("negative degree of flexion: Im(B) is not contained in Ker(G)");
  return dflx;
}

std::vector<DependencyGroup> dependency_groups(const Eigen::MatrixXd& g, const VariationalModel& model,
                                               std::span<const std::size_t> row_owner) {
  std::vector<DependencyGroup> groups;
  const Eigen::Index rows = g.rows();
  if (rows == 0) return groups;

  const Eigen::MatrixXd gt = g.transpose();
  const RankResult factor = numerical_rank(gt, model.tolerance());
  const auto k = static_cast<Eigen::Index>(factor.rank);
  if (k == rows) return groups;

  // G^T P = Q [R11 R12; 0 ~0]: the first k permuted columns (C) are
  // independent and C X = D has the unique solution X = R11^-1 R12.
  const Eigen::MatrixXd& packed = factor.qr.matrixQR();
  const Eigen::MatrixXd r11 = packed.topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r12 = packed.topRightCorner(k, rows - k);
  const Eigen::MatrixXd x =
      k > 0 ? Eigen::MatrixXd(r11.triangularView<Eigen::Upper>().solve(r12)) : Eigen::MatrixXd(0, rows - k);
  const auto& perm = factor.qr.colsPermutation().indices();

  std::set<std::vector<std::size_t>> seen;
  for (Eigen::Index j = 0; j < rows - k; ++j) {
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(rows);
    for (Eigen::Index i = 0; i < k; ++i) coeff(perm(i)) = x(i, j);
    coeff(perm(k + j)) = -1.0;

    const double cutoff = model.tolerance() * coeff.cwiseAbs().maxCoeff();
    DependencyGroup group;
    std::set<std::size_t> owners;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (std::abs(coeff(r)) > cutoff) {
        group.rows.push_back(static_cast<std::size_t>(r));
        owners.insert(row_owner[static_cast<std::size_t>(r)]);
      } else {
        coeff(r) = 0.0;
      }
    }
    std::vector<std::size_t> key(owners.begin(), owners.end());
    if (!seen.insert(key).second) continue;
    for (std::size_t c : key) group.constraints.push_back(model.constraints()[c].id);
    group.coefficients = std::move(coeff);
    groups.push_back(std::move(group));
  }
  return groups;
}

std::vector<DependencyGroup> dependency_groups(const VariationalModel& model) {
  require_witness(model);
  const auto blocks = translate_all(model);
  const auto owners = row_owners(blocks);
  return dependency_groups(geometric_perturbation_matrix(model).matrix, model, owners);
}

namespace {

Eigen::MatrixXd kernel_of(const Eigen::MatrixXd& g, double tol) {
  const Eigen::Index width = g.cols();
  if (g.rows() == 0) return Eigen::MatrixXd::Identity(width, width);
  const auto rank = static_cast<Eigen::Index>(rank_of(g, tol));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeFullV);
  Eigen::MatrixXd kernel = svd.matrixV().rightCols(width - rank);
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) canonical_sign(kernel.col(c));
  return kernel;
}

}  // namespace

Eigen::MatrixXd free_motion_kernel(const VariationalModel& model) {
  return kernel_of(geometric_perturbation_matrix(model).matrix, model.tolerance());
}

std::vector<Eigen::VectorXd> free_motion_sequence(const VariationalModel& model) {
  const Eigen::MatrixXd kernel = free_motion_kernel(model);
  const auto screw = static_cast<Eigen::Index>(model.layout().screw_width());

  std::vector<Eigen::VectorXd> motions;
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    Eigen::VectorXd v = kernel.col(c).head(screw);
    if (v.norm() <= 1e-9) continue;
    motions.push_back(v.normalized());
  }
  if (motions.empty()) return motions;

  // A fixed-seed combination of every free motion flags a flexion between
  // two entity sets whenever any free motion does, so the first pass yields
  // parts that are rigid under the whole kernel regardless of how the
  // basis happens to be aligned.
  std::mt19937 rng(0x6c73u);
  std::normal_distribution<double> weight(0.0, 1.0);
  Eigen::VectorXd lead = Eigen::VectorXd::Zero(screw);
  for (const auto& v : motions) lead += weight(rng) * v;
  if (lead.norm() > 1e-9) motions.insert(motions.begin(), lead.normalized());
  return motions;
}

bool is_flexion(const VariationalModel& model, std::span<const std::size_t> part, std::size_t candidate,
                const Eigen::VectorXd& motion) {
  std::vector<std::size_t> set(part.begin(), part.end());
  set.push_back(candidate);
  const Eigen::MatrixXd basis = restricted_motion_basis(model, set);
  Eigen::VectorXd b(static_cast<Eigen::Index>(6 * set.size()));
  for (std::size_t k = 0; k < set.size(); ++k) {
    b.segment<6>(static_cast<Eigen::Index>(6 * k)) = motion.segment<6>(static_cast<Eigen::Index>(6 * set[k]));
  }
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(basis);
  const Eigen::VectorXd x = cod.solve(b);
  const double residual = (basis * x - b).norm();
  return residual > model.tolerance() * std::max(1.0, b.norm());
}

std::vector<std::vector<std::size_t>> subdivide_system(const VariationalModel& model,
                                                       std::span<const Eigen::VectorXd> motions,
                                                       std::size_t index,
                                                       std::vector<std::size_t> entities) {
  std::vector<std::vector<std::size_t>> partition;
  const Eigen::VectorXd& motion = motions[index];
  while (!entities.empty()) {
    std::vector<std::size_t> rigid{entities.front()};
    std::vector<std::size_t> rest;
    for (auto it = entities.begin() + 1; it != entities.end(); ++it) {
      if (is_flexion(model, rigid, *it, motion)) {
        rest.push_back(*it);
      } else {
        rigid.push_back(*it);
      }
    }
    entities = std::move(rest);
    if (index + 1 < motions.size()) {
      auto sub = subdivide_system(model, motions, index + 1, std::move(rigid));
      partition.insert(partition.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
    } else {
      partition.push_back(std::move(rigid));
    }
  }
  return partition;
}

namespace {

RigidPartition make_partition(const VariationalModel& model, std::vector<std::vector<std::size_t>> parts) {
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

  RigidPartition out;
  std::vector<std::size_t> part_of(model.entities().size(), 0);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    std::vector<std::string> ids;
    for (std::size_t e : parts[p]) {
      part_of[e] = p;
      ids.push_back(model.entities()[e].id);
    }
    out.parts.push_back(std::move(ids));
  }
  out.part_indices = std::move(parts);

  for (std::size_t c = 0; c < model.constraints().size(); ++c) {
    std::set<std::size_t> touched;
    for (std::size_t e : model.constraint_entities(c)) touched.insert(part_of[e]);
    if (touched.size() >= 2) out.bridging.push_back({model.constraints()[c].id, {touched.begin(), touched.end()}});
  }
  return out;
}

RigidPartition rigid_partition_unchecked(const VariationalModel& model) {
  std::vector<std::size_t> all(model.entities().size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto motions = free_motion_sequence(model);
  if (motions.empty()) return make_partition(model, {all});
  return make_partition(model, subdivide_system(model, motions, 0, std::move(all)));
}

ConstrainedState state_from(const VariationalModel& model, const WitnessReport& witness) {
  ConstrainedState state;
  state.witness_residual = witness.max_abs_residual;
  const auto g = geometric_perturbation_matrix(model);
  state.rows = static_cast<std::size_t>(g.matrix.rows());
  state.columns = static_cast<std::size_t>(g.matrix.cols());
  if (!witness.valid) {
    state.inconsistent = true;
    return state;
  }
  state.rank_g = rank_of(g.matrix, model.tolerance());
  state.rank_b = motion_basis_rank(model);
  state.dflx = static_cast<long>(state.columns) - static_cast<long>(state.rank_g) - static_cast<long>(state.rank_b);
  if (state.dflx < 0) throw std::logic_error("negative degree of flexion: Im(B) is not contained in Ker(G)");
  state.under = state.dflx > 0;
  state.over_consistent = state.rank_g < state.rows;
  state.well = !state.under && !state.over_consistent;
  return state;
}

}  // namespace

RigidPartition maximal_rigid_subsystems(const VariationalModel& model) {
  require_witness(model);
  return rigid_partition_unchecked(model);
}

ConstrainedState classify(const VariationalModel& model) { return state_from(model, validate_witness(model)); }

AnalysisReport analyze(const VariationalModel& model) {
  AnalysisReport report;
  report.tolerance = model.tolerance();
  report.witness = validate_witness(model);
  report.state = state_from(model, report.witness);
  if (!report.witness.valid) return report;
  const auto blocks = translate_all(model);
  const auto owners = row_owners(blocks);
  report.groups = dependency_groups(geometric_perturbation_matrix(model).matrix, model, owners);
  report.partition = rigid_partition_unchecked(model);
  return report;
}

}  // namespace gcsa
