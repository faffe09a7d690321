#include "tvnet/metrics.hpp"

#include "tvnet/errors.hpp"

#include <cmath>

namespace tvnet {

double frobenius_offdiag(const Matrix& M) {
    double s = 0.0;
    const int n = static_cast<int>(M.rows());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += M(i, j) * M(i, j);
    return std::sqrt(s);
}

double two_inf_offdiag(const Matrix& M) {
    double best = 0.0;
    const int n = static_cast<int>(M.rows());
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            if (i != j) s += M(i, j) * M(i, j);
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

ErrorRecord rel_errors(const Matrix& P_hat, const Matrix& P_true, double t) {
    if (P_hat.rows() != P_true.rows() || P_hat.cols() != P_true.cols())
        throw ValidationError("metrics: dimension mismatch");
    double denom_f = frobenius_offdiag(P_true);
    double denom_2i = two_inf_offdiag(P_true);
    if (denom_f == 0.0 || denom_2i == 0.0)
        throw ValidationError("metrics: reference matrix has zero off-diagonal norm");
    Matrix diff = P_hat - P_true;
    ErrorRecord r;
    r.t = t;
    r.frob_rel = frobenius_offdiag(diff) / denom_f;
    r.two_inf_rel = two_inf_offdiag(diff) / denom_2i;
    return r;
}

} // namespace tvnet
