#include "tvnet/neighborhood.hpp"

#include "tvnet/errors.hpp"
#include "tvnet/local_poly.hpp"
#include "tvnet/threading.hpp"

#include <algorithm>
#include <cmath>

namespace tvnet {

Matrix pairwise_distance(const Matrix& P_tilde) {
    const int n = static_cast<int>(P_tilde.rows());
    if (n < 3)
        throw ValidationError("nbhd: pairwise distance needs n >= 3 nodes");
    if (P_tilde.cols() != n)
        throw ValidationError("nbhd: matrix must be square");

    // <P_i. - P_i'., P_l.> = G(i,l) - G(i',l) with G = P P^T.
    Matrix G(n, n);
    G.noalias() = P_tilde * P_tilde.transpose();

    Matrix D = Matrix::Zero(n, n);
    parallel_for(n, [&](int i) {
        Eigen::ArrayXd diff(n);
        for (int j = i + 1; j < n; ++j) {
            diff = (G.row(i) - G.row(j)).array().abs();
            diff(i) = -1.0;
            diff(j) = -1.0;
            double d = std::sqrt(diff.maxCoeff() / n);
            D(i, j) = d;
            D(j, i) = d;
        }
    });
    return D;
}

NeighborhoodSet build_neighborhoods(const Matrix& D, double h2) {
    const int n = static_cast<int>(D.rows());
    if (D.cols() != n || n < 2)
        throw ValidationError("nbhd: distance matrix must be square with n >= 2");
    if (!(h2 > 0.0 && h2 <= 1.0))
        throw ValidationError("nbhd: h2 must lie in (0,1]");

    // Type-1 empirical quantile: the ceil(h2*(n-1))-th smallest of the n-1
    // off-diagonal distances from each node.
    const int rank = static_cast<int>(std::ceil(h2 * (n - 1)));

    NeighborhoodSet out;
    out.members.resize(n);
    out.threshold.resize(n);
    std::vector<double> row(n - 1);
    for (int i = 0; i < n; ++i) {
        int idx = 0;
        for (int k = 0; k < n; ++k)
            if (k != i) row[idx++] = D(i, k);
        std::nth_element(row.begin(), row.begin() + (rank - 1), row.end());
        double q = row[rank - 1];
        out.threshold[i] = q;
        auto& mem = out.members[i];
        for (int k = 0; k < n; ++k)
            if (k == i || D(i, k) <= q) mem.push_back(k);
    }
    return out;
}

Matrix neighborhood_smooth(const Matrix& P_tilde, const NeighborhoodSet& nbhd) {
    const int n = static_cast<int>(P_tilde.rows());
    if (static_cast<int>(nbhd.members.size()) != n)
        throw ValidationError("nbhd: neighborhood set does not match matrix size");

    // H = W P with W the row-normalized membership indicator; the dense
    // product keeps the summation order fixed.
    Matrix W = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const auto& mem = nbhd.members[i];
        double w = 1.0 / static_cast<double>(mem.size());
        for (int j : mem) W(i, j) = w;
    }
    Matrix H(n, n);
    H.noalias() = W * P_tilde;
    Matrix out = 0.5 * (H + H.transpose());
    clip_unit_interval(out);
    return out;
}

} // namespace tvnet
