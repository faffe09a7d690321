#pragma once

#include "tvnet/types.hpp"

namespace tvnet {

/// Relative errors at one time point; both exclude the diagonal.
struct ErrorRecord {
    double t = 0.0;
    double frob_rel = 0.0;     // ||Phat - P||_F / ||P||_F over i != j
    double two_inf_rel = 0.0;  // max_i ||row_i||_2 ratio over i != j
};

/// Frobenius norm over the off-diagonal entries.
double frobenius_offdiag(const Matrix& M);

/// Maximum Euclidean row norm over the off-diagonal entries of each row.
double two_inf_offdiag(const Matrix& M);

/// Both relative errors of P_hat against P_true. Throws on dimension
/// mismatch or when a zero denominator would make the ratio undefined.
ErrorRecord rel_errors(const Matrix& P_hat, const Matrix& P_true, double t = 0.0);

} // namespace tvnet
