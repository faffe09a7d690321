#pragma once

#include "tvnet/types.hpp"

#include <vector>

namespace tvnet {

/// Per-node quantile neighborhoods. members[i] always contains i itself and
/// is sorted ascending; threshold[i] is the empirical h2-quantile of the
/// off-diagonal distances from i.
struct NeighborhoodSet {
    std::vector<std::vector<int>> members;
    std::vector<double> threshold;
};

/// Empirical distance between graphon slices,
///   d(i,i') = sqrt( max_{l != i,i'} | <P_i. - P_i'., P_l.> | / n ),
/// computed from the full rows of P (all n coordinates). Requires n >= 3.
Matrix pairwise_distance(const Matrix& P_tilde);

/// Thresholds each node's distances at the ceil(h2*(n-1))-th smallest
/// off-diagonal value; ties at the threshold are all included.
NeighborhoodSet build_neighborhoods(const Matrix& D, double h2);

/// Row averaging over neighborhoods, symmetrized as (H + H^T)/2 and clipped
/// to [0,1]. The diagonal is the row-average formula at j = i; downstream
/// metrics never read it.
Matrix neighborhood_smooth(const Matrix& P_tilde, const NeighborhoodSet& nbhd);

} // namespace tvnet
