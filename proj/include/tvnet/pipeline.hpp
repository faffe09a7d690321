#pragma once

#include "tvnet/local_poly.hpp"
#include "tvnet/types.hpp"

#include <vector>

namespace tvnet {

/// Equivalent weights with the boundary fallback: when the design is
/// singular at a query time whose window sticks out of [0,1], the bandwidth
/// is doubled once (logged to stderr) before the error propagates.
WeightVector weights_with_boundary_fallback(const TimeGrid& grid, double t, double h, int ell,
                                            KernelKind kernel);

/// Two-stage estimator: temporal local polynomial smoothing at each query
/// time followed by node-domain neighborhood smoothing. Queries are
/// processed independently (and in parallel).
ProbMatrixSequence estimate_two_stage(const SnapshotSequence& data,
                                      const std::vector<double>& query_times,
                                      const SmoothConfig& cfg);

/// Same estimator on a probability sequence instead of binary snapshots
/// (noiseless path; also used by the temporal refinement).
ProbMatrixSequence estimate_two_stage(const ProbMatrixSequence& data,
                                      const std::vector<double>& query_times,
                                      const SmoothConfig& cfg);

/// Three-stage estimator: two-stage at every grid point, then a second
/// temporal pass with bandwidth h3 at each query time. Requires cfg.h3.
ProbMatrixSequence estimate_three_stage(const SnapshotSequence& data,
                                        const std::vector<double>& query_times,
                                        const SmoothConfig& cfg);

/// Baseline variants: reversed (neighborhood smoothing per raw snapshot,
/// then temporal smoothing), independent (neighborhood smoothing of the
/// snapshot nearest each query, no temporal model) and pooled (neighborhood
/// smoothing of the time-averaged network, constant over queries).
/// cfg.variant selects which one runs.
ProbMatrixSequence estimate_variant(const SnapshotSequence& data,
                                    const std::vector<double>& query_times,
                                    const SmoothConfig& cfg);

/// Dispatches on cfg.variant (proposed -> two- or three-stage per use_h3).
ProbMatrixSequence estimate(const SnapshotSequence& data,
                            const std::vector<double>& query_times,
                            const SmoothConfig& cfg, bool use_h3 = false);

/// Largest per-snapshot edge density; plugin estimate of the sparsity level
/// used only by the bandwidth suggestion helper.
double estimate_sparsity(const SnapshotSequence& data);

/// Order-of-magnitude bandwidth suggestions from the theory. Informational
/// only: constants are unknown, so cross-validation remains the operational
/// selector and nothing here overrides user config.
struct BandwidthSuggestion {
    bool dense_regime = true; // whether n*rho clears the regime threshold
    double threshold = 0.0;   // sqrt(n m^{beta/(beta+1)} log(nm)) vs n*rho
    // dense regime (node smoothing essential)
    double dense_h1 = 0.0, dense_h2 = 0.0, dense_h3 = 0.0;
    // time-rich regime (neighborhood step nearly bypassed, h2 ~ 1/n)
    double sparse_h1 = 0.0, sparse_h2 = 0.0, sparse_h3 = 0.0;
};

BandwidthSuggestion suggest_bandwidths(int n, int m, double rho, double beta);

/// Human-readable rendering of the suggestion (used by the CLI).
std::string format_suggestion(const BandwidthSuggestion& s, int n, int m, double rho, double beta);

} // namespace tvnet
