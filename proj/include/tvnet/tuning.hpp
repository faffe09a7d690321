#pragma once

#include "tvnet/types.hpp"

#include <string>
#include <vector>

namespace tvnet {

/// Candidate grid for leave-one-time-out cross-validation.
struct CvGrid {
    std::vector<int> ells;
    std::vector<double> h1s;
    std::vector<double> h2s;

    /// ell in {0,1,2}; h1: 8 log-spaced points in [2/m, 0.5]; h2: 8
    /// log-spaced points in [1/(n-1), 1].
    static CvGrid defaults(int n, int m);

    void validate() const;
};

struct CvCandidate {
    int ell = 0;
    double h1 = 0.0;
    double h2 = 0.0;
};

/// Per-candidate record. fold_errors holds NaN for invalid folds (singular
/// design after the boundary fallback); any invalid fold disqualifies the
/// candidate, so err_mean is +inf there while err_mean_valid keeps the mean
/// over the folds that did run.
struct CvEntry {
    CvCandidate theta;
    std::vector<double> fold_errors;
    int valid_folds = 0;
    double err_mean = 0.0;
    double err_mean_valid = 0.0;
};

struct CvReport {
    Variant variant = Variant::proposed;
    KernelKind kernel = KernelKind::tricube;
    CvGrid grid;
    std::vector<CvEntry> entries; // lexicographic (ell, h1, h2) order
    CvCandidate best;
    double best_err = 0.0;
    int folds = 0;

    std::string to_json() const;
};

/// Algorithm-1 leave-one-time-out cross-validation. For every candidate and
/// every held-out snapshot: fit on the m-1 remaining snapshots, predict at
/// the held-out time and score the relative Frobenius error against the
/// held-out adjacency over off-diagonal entries. The winner is the
/// lexicographically smallest (ell, h1, h2) among the minimizers.
///
/// variant may be proposed, independent or pooled (independent/pooled ignore
/// ell and h1, so pass singleton lists for those); the reversed baseline is
/// tuned against the truth by the benchmark harness instead.
CvReport cross_validate(const SnapshotSequence& data, const CvGrid& grid,
                        Variant variant = Variant::proposed,
                        KernelKind kernel = KernelKind::tricube);

/// SmoothConfig carrying the chosen candidate.
SmoothConfig chosen_config(const CvReport& report);

/// JSON codecs for the CLI config files. Missing SmoothConfig fields keep
/// their defaults; missing CvGrid lists fall back to CvGrid::defaults(n, m).
SmoothConfig smooth_config_from_json(const std::string& text);
CvGrid cv_grid_from_json(const std::string& text, int n, int m);

} // namespace tvnet
