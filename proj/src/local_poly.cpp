#include "tvnet/local_poly.hpp"

#include "tvnet/errors.hpp"
#include "tvnet/threading.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <set>
#include <string>

namespace tvnet {

namespace {

constexpr double kConditionLimit = 1e12;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

// Positive-kernel grid points inside [t-h, t+h]; points exactly on the
// boundary contribute nothing for kernels vanishing at |u| = 1.
int support_count(const TimeGrid& grid, double t, double h, KernelKind kernel) {
    std::set<double> distinct;
    for (int k = 0; k < grid.count(); ++k)
        if (kernel_value(kernel, (grid[k] - t) / h) > 0.0) distinct.insert(grid[k]);
    return static_cast<int>(distinct.size());
}

[[noreturn]] void throw_singular(double t, double h, int ell, const char* why) {
    throw SingularDesignError("lpoly: design matrix singular at t=" + fmt(t) + " (h=" + fmt(h) +
                              ", ell=" + std::to_string(ell) + "): " + why +
                              "; enlarging h adds grid points to the window");
}

} // namespace

Matrix design_matrix(const TimeGrid& grid, double t, double h, int ell, KernelKind kernel) {
    if (ell < 0 || ell > 4) throw ValidationError("lpoly: degree must be in 0..4");
    if (!(h > 0.0)) throw ValidationError("lpoly: bandwidth must be positive");
    const int m = grid.count();
    const int p = ell + 1;

    if (support_count(grid, t, h, kernel) < p)
        throw_singular(t, h, ell, "fewer than ell+1 distinct grid points in the window");

    Matrix B = Matrix::Zero(p, p);
    Vector U(p);
    for (int k = 0; k < m; ++k) {
        double u = (grid[k] - t) / h;
        double Kv = kernel_value(kernel, u);
        if (Kv == 0.0) continue;
        U(0) = 1.0;
        for (int q = 1; q < p; ++q) U(q) = U(q - 1) * u;
        B.noalias() += Kv * (U * U.transpose());
    }
    B /= static_cast<double>(m) * h;

    Eigen::SelfAdjointEigenSolver<Matrix> es(B);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kConditionLimit)
        throw_singular(t, h, ell, "condition number exceeds 1e12");
    return B;
}

WeightVector equiv_weights(const TimeGrid& grid, double t, double h, int ell, KernelKind kernel) {
    const int m = grid.count();
    if (m < 2) throw ValidationError("lpoly: temporal smoothing needs at least 2 grid points");
    if (h < 1.0 / (2.0 * m))
        throw SingularDesignError("lpoly: bandwidth h=" + fmt(h) + " below 1/(2m)=" +
                                  fmt(1.0 / (2.0 * m)) + " for this grid");

    Matrix B = design_matrix(grid, t, h, ell, kernel);
    const int p = ell + 1;

    // Solve B a = e0 for the equivalent-kernel coefficient vector, with one
    // step of iterative refinement to keep the moment residuals near eps.
    Vector e0 = Vector::Zero(p);
    e0(0) = 1.0;
    Eigen::LDLT<Matrix> ldlt(B);
    Vector a = ldlt.solve(e0);
    a += ldlt.solve(e0 - B * a);

    WeightVector wv;
    wv.t = t;
    wv.h = h;
    wv.weights = Vector::Zero(m);
    Vector U(p);
    const double scale = 1.0 / (static_cast<double>(m) * h);
    for (int k = 0; k < m; ++k) {
        double u = (grid[k] - t) / h;
        double Kv = kernel_value(kernel, u);
        if (Kv == 0.0) continue; // exact zero outside the window
        U(0) = 1.0;
        for (int q = 1; q < p; ++q) U(q) = U(q - 1) * u;
        wv.weights(k) = scale * Kv * U.dot(a);
    }
    return wv;
}

Matrix weighted_matrix_sum(std::span<const Matrix> mats, const Vector& weights) {
    if (static_cast<int>(mats.size()) != weights.size())
        throw ValidationError("lpoly: weight/matrix count mismatch");
    const int n = static_cast<int>(mats.empty() ? 0 : mats[0].rows());
    Matrix out = Matrix::Zero(n, n);
    for (int k = 0; k < weights.size(); ++k) {
        if (weights(k) == 0.0) continue;
        out.noalias() += weights(k) * mats[k];
    }
    return out;
}

void clip_unit_interval(Matrix& M) {
    M = M.array().min(1.0).max(0.0).matrix();
}

Matrix smooth_matrix_sequence(std::span<const Matrix> mats, const TimeGrid& grid, double t,
                              double h, int ell, KernelKind kernel) {
    WeightVector wv = equiv_weights(grid, t, h, ell, kernel);
    Matrix out = weighted_matrix_sum(mats, wv.weights);
    clip_unit_interval(out);
    return out;
}

Matrix smooth_sequence(const SnapshotSequence& seq, double t, const SmoothConfig& cfg, double h) {
    return smooth_matrix_sequence(seq.adjacency, seq.grid, t, h, cfg.ell, cfg.kernel);
}

Matrix smooth_sequence(const ProbMatrixSequence& seq, double t, const SmoothConfig& cfg, double h) {
    return smooth_matrix_sequence(seq.matrices, seq.grid, t, h, cfg.ell, cfg.kernel);
}

} // namespace tvnet
