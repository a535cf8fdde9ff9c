#pragma once

// Independent reference computations and model generators for the tests.

#include "gcsa/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <random>
#include <string>
#include <vector>

namespace gcsa::testing {

/// Rank from singular values: count of sigma_i > tol * max(1, sigma_0).
std::size_t svd_rank(const Eigen::MatrixXd& m, double tol = 1e-7);

/// J by central differences of the raw residuals over (p, n) of every entity
/// and every aux scalar. Orientations are perturbed without renormalizing.
Eigen::MatrixXd fd_jacobian(const VariationalModel& model, double step = 1e-6);

/// Relative Frobenius distance ||a - b|| / max(||b||, 1e-300).
double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

Mat3 random_rotation(std::mt19937& rng);
Vec3 random_unit(std::mt19937& rng);

/// A random model whose stored geometry satisfies every constraint. Built as
/// a tree of entities, each placed to satisfy one constraint to an earlier
/// entity, with occasional duplicated constraints, then moved rigidly.
VariationalModel random_valid_model(std::mt19937& rng);

/// Uniformly random permutation of 0..n-1.
std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937& rng);

/// Every set sorted, then the list sorted; for order-free comparison.
std::vector<std::vector<std::string>> canonical_sets(std::vector<std::vector<std::string>> sets);

}  // namespace gcsa::testing
