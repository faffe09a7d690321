#include "tvnet/tuning.hpp"

#include "tvnet/errors.hpp"
#include "tvnet/local_poly.hpp"
#include "tvnet/metrics.hpp"
#include "tvnet/neighborhood.hpp"
#include "tvnet/pipeline.hpp"
#include "tvnet/threading.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <iostream>
#include <limits>

using nlohmann::json;

namespace tvnet {

namespace {

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out(count);
    double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < count; ++i)
        out[i] = std::exp(la + (lb - la) * i / (count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

double fold_error(const Matrix& P_hat, const Matrix& A_heldout) {
    return frobenius_offdiag(P_hat - A_heldout) / frobenius_offdiag(A_heldout);
}

} // namespace

CvGrid CvGrid::defaults(int n, int m) {
    CvGrid g;
    g.ells = {0, 1, 2};
    g.h1s = log_spaced(2.0 / m, 0.5, 8);
    g.h2s = log_spaced(1.0 / (n - 1), 1.0, 8);
    return g;
}

void CvGrid::validate() const {
    if (ells.empty() || h1s.empty() || h2s.empty())
        throw ValidationError("tuning: candidate lists must be nonempty");
    for (int e : ells)
        if (e < 0 || e > 4) throw ValidationError("tuning: degree out of range 0..4");
    for (double h : h1s)
        if (!(h > 0.0 && h <= 1.0)) throw ValidationError("tuning: h1 candidate outside (0,1]");
    for (double h : h2s)
        if (!(h > 0.0 && h <= 1.0)) throw ValidationError("tuning: h2 candidate outside (0,1]");
}

CvReport cross_validate(const SnapshotSequence& data, const CvGrid& grid, Variant variant,
                        KernelKind kernel) {
    grid.validate();
    const int m = data.grid.count();
    const int n = data.n;
    if (m < 3) throw ValidationError("tuning: cross-validation needs m >= 3 snapshots");
    if (variant == Variant::reversed)
        throw ValidationError("tuning: the reversed baseline is oracle-tuned, not cross-validated");
    for (int k = 0; k < m; ++k)
        if (frobenius_offdiag(data.adjacency[k]) == 0.0)
            throw ValidationError("tuning: snapshot " + std::to_string(k) +
                                  " has no edges; fold error undefined");

    const int ne = static_cast<int>(grid.ells.size());
    const int n1 = static_cast<int>(grid.h1s.size());
    const int n2 = static_cast<int>(grid.h2s.size());
    const int ntheta = ne * n1 * n2;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<double>> errors(ntheta, std::vector<double>(m, nan));
    auto slot = [&](int e, int i1, int i2) { return (e * n1 + i1) * n2 + i2; };

    // For the variants that ignore the temporal parameters, the per-snapshot
    // distance matrices are shared across candidates.
    std::vector<Matrix> snap_dist;
    if (variant == Variant::independent) {
        snap_dist.resize(m);
        parallel_for(m, [&](int k) { snap_dist[k] = pairwise_distance(data.adjacency[k]); });
    }
    Matrix adj_sum;
    if (variant == Variant::pooled) {
        adj_sum = Matrix::Zero(n, n);
        for (const Matrix& A : data.adjacency) adj_sum += A;
    }

    parallel_for(m, [&](int k) {
        const Matrix& held_out = data.adjacency[k];
        TimeGrid train_grid = data.grid.without(k);
        std::vector<Matrix> train;
        train.reserve(m - 1);
        for (int s = 0; s < m; ++s)
            if (s != k) train.push_back(data.adjacency[s]);

        switch (variant) {
            case Variant::proposed: {
                for (int e = 0; e < ne; ++e) {
                    for (int i1 = 0; i1 < n1; ++i1) {
                        WeightVector wv;
                        try {
                            wv = weights_with_boundary_fallback(train_grid, data.grid[k],
                                                                grid.h1s[i1], grid.ells[e],
                                                                kernel);
                        } catch (const SingularDesignError&) {
                            continue; // all h2 slots for this (ell,h1) stay invalid
                        }
                        Matrix P_tilde = weighted_matrix_sum(train, wv.weights);
                        clip_unit_interval(P_tilde);
                        Matrix D = pairwise_distance(P_tilde);
                        for (int i2 = 0; i2 < n2; ++i2) {
                            NeighborhoodSet nb = build_neighborhoods(D, grid.h2s[i2]);
                            Matrix P_hat = neighborhood_smooth(P_tilde, nb);
                            errors[slot(e, i1, i2)][k] = fold_error(P_hat, held_out);
                        }
                    }
                }
                break;
            }
            case Variant::independent: {
                // nearest training snapshot; ties resolve to the earlier time
                int j = -1;
                double best = std::numeric_limits<double>::infinity();
                for (int s = 0; s < m; ++s) {
                    if (s == k) continue;
                    double d = std::abs(data.grid[s] - data.grid[k]);
                    if (d < best) {
                        best = d;
                        j = s;
                    }
                }
                for (int i2 = 0; i2 < n2; ++i2) {
                    NeighborhoodSet nb = build_neighborhoods(snap_dist[j], grid.h2s[i2]);
                    Matrix P_hat = neighborhood_smooth(data.adjacency[j], nb);
                    double err = fold_error(P_hat, held_out);
                    for (int e = 0; e < ne; ++e)
                        for (int i1 = 0; i1 < n1; ++i1) errors[slot(e, i1, i2)][k] = err;
                }
                break;
            }
            case Variant::pooled: {
                Matrix mean = (adj_sum - held_out) / static_cast<double>(m - 1);
                Matrix D = pairwise_distance(mean);
                for (int i2 = 0; i2 < n2; ++i2) {
                    NeighborhoodSet nb = build_neighborhoods(D, grid.h2s[i2]);
                    Matrix P_hat = neighborhood_smooth(mean, nb);
                    double err = fold_error(P_hat, held_out);
                    for (int e = 0; e < ne; ++e)
                        for (int i1 = 0; i1 < n1; ++i1) errors[slot(e, i1, i2)][k] = err;
                }
                break;
            }
            case Variant::reversed:
                break; // rejected above
        }
    });

    CvReport report;
    report.variant = variant;
    report.kernel = kernel;
    report.grid = grid;
    report.folds = m;
    report.entries.reserve(ntheta);
    const double inf = std::numeric_limits<double>::infinity();
    int disqualified = 0;
    for (int e = 0; e < ne; ++e) {
        for (int i1 = 0; i1 < n1; ++i1) {
            for (int i2 = 0; i2 < n2; ++i2) {
                CvEntry entry;
                entry.theta = {grid.ells[e], grid.h1s[i1], grid.h2s[i2]};
                entry.fold_errors = errors[slot(e, i1, i2)];
                double sum = 0.0;
                for (double err : entry.fold_errors) {
                    if (!std::isnan(err)) {
                        ++entry.valid_folds;
                        sum += err;
                    }
                }
                entry.err_mean_valid =
                    entry.valid_folds ? sum / entry.valid_folds : inf;
                entry.err_mean = entry.valid_folds == m ? sum / m : inf;
                if (entry.valid_folds != m) ++disqualified;
                report.entries.push_back(std::move(entry));
            }
        }
    }
    if (disqualified > 0)
        std::cerr << "tuning: " << disqualified << " of " << ntheta
                  << " candidates had singular folds and were disqualified\n";

    // lexicographically first strict minimizer
    int best_idx = -1;
    double best = inf;
    for (int i = 0; i < ntheta; ++i) {
        if (report.entries[i].err_mean < best) {
            best = report.entries[i].err_mean;
            best_idx = i;
        }
    }
    if (best_idx < 0)
        throw SingularDesignError("tuning: every candidate had at least one singular fold");
    report.best = report.entries[best_idx].theta;
    report.best_err = best;
    return report;
}

SmoothConfig chosen_config(const CvReport& report) {
    SmoothConfig cfg;
    cfg.ell = report.best.ell;
    cfg.h1 = report.best.h1;
    cfg.h2 = report.best.h2;
    cfg.kernel = report.kernel;
    cfg.variant = report.variant;
    return cfg;
}

SmoothConfig smooth_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("tuning: bad config JSON: ") + e.what());
    }
    SmoothConfig cfg;
    try {
        if (j.contains("ell")) cfg.ell = j["ell"].get<int>();
        if (j.contains("h1")) cfg.h1 = j["h1"].get<double>();
        if (j.contains("h2")) cfg.h2 = j["h2"].get<double>();
        if (j.contains("h3") && !j["h3"].is_null()) cfg.h3 = j["h3"].get<double>();
        if (j.contains("kernel")) cfg.kernel = kernel_from_string(j["kernel"].get<std::string>());
        if (j.contains("variant")) cfg.variant = variant_from_string(j["variant"].get<std::string>());
    } catch (const json::exception& e) {
        throw ParseError(std::string("tuning: bad config JSON: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

CvGrid cv_grid_from_json(const std::string& text, int n, int m) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("tuning: bad grid JSON: ") + e.what());
    }
    CvGrid grid = CvGrid::defaults(n, m);
    try {
        if (j.contains("ells")) grid.ells = j["ells"].get<std::vector<int>>();
        if (j.contains("h1s")) grid.h1s = j["h1s"].get<std::vector<double>>();
        if (j.contains("h2s")) grid.h2s = j["h2s"].get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("tuning: bad grid JSON: ") + e.what());
    }
    grid.validate();
    return grid;
}

std::string CvReport::to_json() const {
    json j;
    j["variant"] = tvnet::to_string(variant);
    j["kernel"] = tvnet::to_string(kernel);
    j["folds"] = folds;
    j["grid"] = {{"ells", grid.ells}, {"h1s", grid.h1s}, {"h2s", grid.h2s}};
    json entries_json = json::array();
    for (const CvEntry& e : entries) {
        json fold = json::array();
        for (double err : e.fold_errors) {
            if (std::isnan(err))
                fold.push_back(nullptr);
            else
                fold.push_back(err);
        }
        json row = {{"ell", e.theta.ell},
                    {"h1", e.theta.h1},
                    {"h2", e.theta.h2},
                    {"fold_errors", fold},
                    {"valid_folds", e.valid_folds}};
        if (std::isfinite(e.err_mean))
            row["err_mean"] = e.err_mean;
        else
            row["err_mean"] = nullptr;
        if (std::isfinite(e.err_mean_valid))
            row["err_mean_valid"] = e.err_mean_valid;
        else
            row["err_mean_valid"] = nullptr;
        entries_json.push_back(std::move(row));
    }
    j["entries"] = std::move(entries_json);
    j["best"] = {{"ell", best.ell}, {"h1", best.h1}, {"h2", best.h2}, {"err_mean", best_err}};
    return j.dump(2) + "\n";
}

} // namespace tvnet
