#pragma once

// Constrained-state characterization and decomposition.
//
//   DFLX = ColumnSize(G) - Rank(G) - Rank(B)
//   under-constrained   <=> DFLX > 0
//   dependent equations <=> Rank(G) < RowSize(G)
//
// Dependency groups come from a column-pivoted QR of G^T; maximal rigid
// subsystems from a recursive subdivision driven by free motions (vectors
// of Ker(G)).

#include "gcsa/model.hpp"
#include "gcsa/perturbation.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcsa {

/// Raised by analysis operations that require a valid witness.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RankResult {
  std::size_t rank = 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
};

/// Rank from a column-pivoted QR: the number of |R_ii| > tol * max(1, |R_00|).
/// An empty matrix has rank 0.
RankResult numerical_rank(const Eigen::MatrixXd& matrix, double tol = kDefaultTolerance);

struct ConstrainedState {
  bool well = false;
  bool under = false;
  bool over_consistent = false;
  bool inconsistent = false;

  long dflx = 0;
  std::size_t rank_g = 0;
  std::size_t rank_b = 0;
  std::size_t rows = 0;
  std::size_t columns = 0;
  double witness_residual = 0.0;

  bool over() const { return over_consistent || inconsistent; }
};

struct DependencyGroup {
  /// Owning constraint ids, in model constraint order.
  std::vector<std::string> constraints;
  /// Equation rows with non-zero coefficient, ascending.
  std::vector<std::size_t> rows;
  /// Full-length coefficient vector over G's rows; G^T * coefficients = 0.
  Eigen::VectorXd coefficients;
};

struct Bridge {
  std::string constraint;
  /// Indices into RigidPartition::parts, ascending.
  std::vector<std::size_t> parts;
};

struct RigidPartition {
  /// Entity ids per part, each in model order; parts ordered by their first
  /// entity's model index.
  std::vector<std::vector<std::string>> parts;
  std::vector<std::vector<std::size_t>> part_indices;
  std::vector<Bridge> bridging;

  /// Number of bridging constraints touching both parts a and b.
  std::size_t bridges_between(std::size_t a, std::size_t b) const;
};

/// Rank of the motion basis B.
std::size_t motion_basis_rank(const VariationalModel& model);

/// DFLX. Throws AnalysisError on an invalid witness.
long degree_of_flexion(const VariationalModel& model);

/// Minimal dependency groups, lifted to constraint ids and de-duplicated.
/// Empty iff Rank(G) == RowSize(G). Throws AnalysisError on an invalid witness.
std::vector<DependencyGroup> dependency_groups(const VariationalModel& model);

/// Equation-level groups for an arbitrary G with the given row owners.
std::vector<DependencyGroup> dependency_groups(const Eigen::MatrixXd& g, const VariationalModel& model,
                                               std::span<const std::size_t> row_owner);

/// Orthonormal basis of Ker(G) (including aux coordinates), one vector per
/// column, each with its first significant entry positive.
Eigen::MatrixXd free_motion_kernel(const VariationalModel& model);

/// Screw parts of the free motions fed to the subdivision, in order: one
/// fixed generic combination of the kernel basis, then the basis vectors.
/// Vectors whose screw part vanishes (pure aux) are dropped.
std::vector<Eigen::VectorXd> free_motion_sequence(const VariationalModel& model);

/// True when `motion` (screw coordinates for all entities) restricted to
/// part ∪ {candidate} is not a combination of rigid-body and invariant
/// motions of those entities.
bool is_flexion(const VariationalModel& model, std::span<const std::size_t> part, std::size_t candidate,
                const Eigen::VectorXd& motion);

/// Recursive subdivision of `entities` starting at free motion `index` of
/// `motions`. Each returned part is in the order entities were accepted.
std::vector<std::vector<std::size_t>> subdivide_system(const VariationalModel& model,
                                                       std::span<const Eigen::VectorXd> motions,
                                                       std::size_t index,
                                                       std::vector<std::size_t> entities);

/// Maximal rigid subsystems plus bridging constraints.
/// Throws AnalysisError on an invalid witness.
RigidPartition maximal_rigid_subsystems(const VariationalModel& model);

/// Constrained state; an invalid witness is reported as inconsistent.
ConstrainedState classify(const VariationalModel& model);

struct AnalysisReport {
  ConstrainedState state;
  WitnessReport witness;
  double tolerance = kDefaultTolerance;
  std::vector<DependencyGroup> groups;
  /// Absent when the witness is invalid.
  std::optional<RigidPartition> partition;
};

/// classify + dependency_groups + maximal_rigid_subsystems in one pass.
AnalysisReport analyze(const VariationalModel& model);

}  // namespace gcsa
