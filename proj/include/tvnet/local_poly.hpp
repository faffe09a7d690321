#pragma once

#include "tvnet/kernels.hpp"
#include "tvnet/types.hpp"

#include <span>

namespace tvnet {

/// Equivalent kernel weights of an ell-degree local polynomial fit at t.
/// weights has one entry per grid point and is exactly zero outside
/// [t - h, t + h]. Satisfies sum w_k = 1 and sum (t_k - t)^p w_k = 0
/// for p = 1..ell whenever the design matrix is well conditioned.
struct WeightVector {
    double t = 0.0;
    double h = 0.0;
    Vector weights;
};

/// The (ell+1)x(ell+1) moment matrix
///   B = (1/(m h)) sum_k U(u_k) U(u_k)^T K(u_k),  u_k = (t_k - t)/h,
/// with U(u) = (1, u, ..., u^ell)^T. Throws SingularDesignError when fewer
/// than ell+1 distinct grid points carry positive kernel weight or the
/// condition number exceeds 1e12.
Matrix design_matrix(const TimeGrid& grid, double t, double h, int ell, KernelKind kernel);

/// Weights w_k = (1/(m h)) U(0)^T B^{-1} U(u_k) K(u_k). Requires h >= 1/(2m).
WeightVector equiv_weights(const TimeGrid& grid, double t, double h, int ell, KernelKind kernel);

/// Entrywise temporal smoothing of a matrix sequence with one shared weight
/// vector: sum_k w_k M_k, then clipped to [0,1]. mats must all be n x n and
/// aligned with grid.
Matrix smooth_matrix_sequence(std::span<const Matrix> mats, const TimeGrid& grid, double t,
                              double h, int ell, KernelKind kernel);

/// Same smoothing with precomputed weights (no clipping); used internally
/// and by tests that need the raw weighted sum.
Matrix weighted_matrix_sum(std::span<const Matrix> mats, const Vector& weights);

/// Convenience overloads on the domain sequences (Step 1 / Step 3 inputs).
Matrix smooth_sequence(const SnapshotSequence& seq, double t, const SmoothConfig& cfg, double h);
Matrix smooth_sequence(const ProbMatrixSequence& seq, double t, const SmoothConfig& cfg, double h);

/// Clips all entries into [0,1] in place.
void clip_unit_interval(Matrix& M);

} // namespace tvnet
