#pragma once

#include <span>
#include <vector>

#include "smv/matrix.hpp"

namespace smv {

// Entrywise max(., 0).
DenseMatrix project_nonneg(const DenseMatrix& m);
void project_nonneg_inplace(DenseMatrix& m);

/**
 * Euclidean projection onto the capped simplex {h >= 0, sum(h) <= 1}.
 *
 * Clamps to the orthant first; if the clamped vector already sums to at most
 * one it is the answer, otherwise the answer lies on the face sum(h) == 1 and
 * is found by the sort-and-threshold rule h_i = max(v_i - tau, 0).
 */
std::vector<double> project_capped_simplex(std::span<const double> v);
void project_capped_simplex_inplace(std::span<double> v);

// Capped-simplex projection of every column independently.
DenseMatrix project_H_columns(const DenseMatrix& h);
void project_H_columns_inplace(DenseMatrix& h);

/// Membership in S for a (W, H) pair: W >= 0, H >= 0, column sums of H <= 1 + tol.
bool in_constraint_set(const DenseMatrix& w, const DenseMatrix& h, double tol = 1e-12);

}  // namespace smv
