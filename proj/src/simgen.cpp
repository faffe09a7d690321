#include "tvnet/simgen.hpp"

#include "tvnet/errors.hpp"
#include "tvnet/local_poly.hpp"
#include "tvnet/metrics.hpp"
#include "tvnet/neighborhood.hpp"
#include "tvnet/pipeline.hpp"
#include "tvnet/rng.hpp"
#include "tvnet/threading.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

using nlohmann::json;

namespace tvnet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double trend_up(double t) { return 1.0 + 0.5 * std::sin(kTwoPi * t); }
double trend_down(double t) { return 1.0 - 0.5 * std::sin(kTwoPi * t); }
double trend(bool up, double t) { return up ? trend_up(t) : trend_down(t); }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<std::string> default_labels(int n) {
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = std::to_string(i);
    return labels;
}

// Community of each node: sizes floor(n/K), remainder spread over the first
// communities, nodes assigned contiguously.
std::vector<int> assign_communities(int n, int K) {
    std::vector<int> community(n);
    int base = n / K, rem = n % K, node = 0;
    for (int c = 0; c < K; ++c) {
        int size = base + (c < rem ? 1 : 0);
        for (int s = 0; s < size; ++s) community[node++] = c;
    }
    return community;
}

struct SbmLayout {
    std::vector<int> community;
    std::vector<int> sizes;
    Matrix coef;     // K x K: 1 within, out_in_ratio between
    Matrix trend_up; // K x K: 1 where the pair follows 1 + 0.5 sin
};

SbmLayout sbm_layout(const GeneratorSpec& spec) {
    const int K = spec.communities;
    SbmLayout lay;
    lay.community = assign_communities(spec.n, K);
    lay.sizes.assign(K, 0);
    for (int c : lay.community) ++lay.sizes[c];

    lay.coef = Matrix::Constant(K, K, spec.out_in_ratio);
    lay.coef.diagonal().setOnes();

    lay.trend_up = Matrix::Ones(K, K);
    if (spec.model == GenModel::sbm_npd) {
        // first half of the communities invert the within-block trend
        for (int c = 0; c < K; ++c) lay.trend_up(c, c) = (c < K / 2) ? 0.0 : 1.0;
        // between-block pairs flip a fair coin, in lexicographic pair order
        CounterStream coins(spec.seed, rng_purpose::kTrendCoins, 0, 0);
        for (int c = 0; c < K; ++c)
            for (int d = c + 1; d < K; ++d) {
                double up = coins.uniform() < 0.5 ? 1.0 : 0.0;
                lay.trend_up(c, d) = up;
                lay.trend_up(d, c) = up;
            }
    }
    return lay;
}

// Expected mean off-diagonal row sum of P^(t) per unit of the scale a.
double sbm_degree_per_a(const GeneratorSpec& spec, const SbmLayout& lay, double t) {
    double sum = 0.0;
    const int K = spec.communities;
    for (int c = 0; c < K; ++c)
        for (int d = 0; d < K; ++d) {
            double pairs = static_cast<double>(lay.sizes[c]) * lay.sizes[d];
            if (c == d) pairs -= lay.sizes[c];
            sum += pairs * lay.coef(c, d) * trend(lay.trend_up(c, d) != 0.0, t);
        }
    return sum / spec.n;
}

GroundTruth build_sbm_truth(const GeneratorSpec& spec) {
    const TimeGrid grid = TimeGrid::equispaced(spec.m);
    SbmLayout lay = sbm_layout(spec);

    double per_a = sbm_degree_per_a(spec, lay, grid[0]);
    if (per_a <= 0.0) throw CalibrationError("simgen: degenerate block layout");
    double a = spec.target_degree / per_a;

    // entries must stay valid probabilities at every grid time
    double max_factor = 0.0;
    for (int k = 0; k < spec.m; ++k)
        for (int c = 0; c < spec.communities; ++c)
            for (int d = c; d < spec.communities; ++d)
                max_factor = std::max(max_factor, lay.coef(c, d) *
                                                      trend(lay.trend_up(c, d) != 0.0, grid[k]));
    if (a * max_factor > 1.0) {
        double max_degree = spec.target_degree / (a * max_factor);
        throw CalibrationError("simgen: target degree " + std::to_string(spec.target_degree) +
                               " needs a probability above 1; max achievable is about " +
                               std::to_string(max_degree));
    }

    GroundTruth truth;
    truth.community = lay.community;
    truth.pair_trend_up = lay.trend_up;
    truth.cal_a = a;
    truth.cal_b = spec.out_in_ratio * a;

    truth.prob.grid = grid;
    truth.prob.n = spec.n;
    truth.prob.labels = default_labels(spec.n);
    truth.prob.stage = Stage::truth;
    truth.prob.matrices.resize(spec.m);
    for (int k = 0; k < spec.m; ++k) {
        Matrix block(spec.communities, spec.communities);
        for (int c = 0; c < spec.communities; ++c)
            for (int d = 0; d < spec.communities; ++d)
                block(c, d) = a * lay.coef(c, d) * trend(lay.trend_up(c, d) != 0.0, grid[k]);
        Matrix P(spec.n, spec.n);
        for (int i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.n; ++j)
                P(i, j) = i == j ? 0.0 : block(lay.community[i], lay.community[j]);
        truth.prob.matrices[k] = std::move(P);
    }
    return truth;
}

// Smooth latent paths: every coordinate is c0 + c1 sin(2 pi t + phase) with
// per-node coefficients from the node's own stream, normalized so that all
// inner products land in (0, 1].
struct LatentPaths {
    int n = 0, d = 0;
    std::vector<double> c0, c1, phase; // n*d, coordinate-major per node

    double coord(int i, int r, double t) const {
        int idx = i * d + r;
        return c0[idx] + c1[idx] * std::sin(kTwoPi * t + phase[idx]);
    }

    Matrix positions(double t) const {
        Matrix Z(n, d);
        for (int i = 0; i < n; ++i)
            for (int r = 0; r < d; ++r) Z(i, r) = coord(i, r, t);
        return Z;
    }
};

LatentPaths build_latent_paths(const GeneratorSpec& spec) {
    LatentPaths paths;
    paths.n = spec.n;
    paths.d = spec.latent_dim;
    paths.c0.resize(spec.n * spec.latent_dim);
    paths.c1.resize(spec.n * spec.latent_dim);
    paths.phase.resize(spec.n * spec.latent_dim);
    const double norm = 0.95 * std::sqrt(static_cast<double>(spec.latent_dim));
    for (int i = 0; i < spec.n; ++i) {
        CounterStream stream(spec.seed, rng_purpose::kLatentPaths, 0, i);
        for (int r = 0; r < spec.latent_dim; ++r) {
            int idx = i * spec.latent_dim + r;
            paths.c0[idx] = (0.4 + 0.3 * stream.uniform()) / norm;
            paths.c1[idx] = (0.25 * stream.uniform()) / norm;
            paths.phase[idx] = kTwoPi * stream.uniform();
        }
    }
    return paths;
}

// Mean off-diagonal row sum for a monotone family; solved by bisection.
template <typename DegreeFn>
double bisect_for_degree(DegreeFn&& degree, double lo, double hi, double target,
                         const char* what) {
    double f_lo = degree(lo), f_hi = degree(hi);
    int guard = 0;
    while (f_hi < target) {
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = degree(hi);
        if (++guard > 200)
            throw CalibrationError(std::string("simgen: ") + what +
                                   " calibration cannot reach the target degree");
    }
    if (f_lo > target)
        throw CalibrationError(std::string("simgen: ") + what +
                               " calibration bracket does not contain the target");
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        double f = degree(mid);
        if (std::abs(f - target) <= 1e-6) return mid;
        if (f < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

GroundTruth build_rdpg_truth(const GeneratorSpec& spec) {
    const TimeGrid grid = TimeGrid::equispaced(spec.m);
    LatentPaths paths = build_latent_paths(spec);

    Matrix Y1 = paths.positions(grid[0]);
    Matrix G1 = Y1 * Y1.transpose();
    auto degree_of = [&](double sigma) {
        double sum = 0.0;
        for (int i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.n; ++j)
                if (i != j) sum += std::min(sigma * G1(i, j), 1.0);
        return sum / spec.n;
    };
    double sigma = bisect_for_degree(degree_of, 0.0, 1.0, spec.target_degree, "rdpg");

    GroundTruth truth;
    truth.cal_scale = std::sqrt(sigma);
    truth.prob.grid = grid;
    truth.prob.n = spec.n;
    truth.prob.labels = default_labels(spec.n);
    truth.prob.stage = Stage::truth;
    truth.prob.matrices.resize(spec.m);
    truth.latent.resize(spec.m);
    for (int k = 0; k < spec.m; ++k) {
        Matrix Y = paths.positions(grid[k]);
        Matrix P = Matrix::Zero(spec.n, spec.n);
        for (int i = 0; i < spec.n; ++i)
            for (int j = i + 1; j < spec.n; ++j) {
                double v = std::min(sigma * Y.row(i).dot(Y.row(j)), 1.0); // documented clip
                P(i, j) = v;
                P(j, i) = v;
            }
        truth.latent[k] = truth.cal_scale * Y;
        truth.prob.matrices[k] = std::move(P);
    }
    return truth;
}

GroundTruth build_latent_distance_truth(const GeneratorSpec& spec) {
    const TimeGrid grid = TimeGrid::equispaced(spec.m);
    LatentPaths paths = build_latent_paths(spec);

    auto distances_at = [&](double t) {
        Matrix Z = paths.positions(t);
        Matrix D(spec.n, spec.n);
        for (int i = 0; i < spec.n; ++i) {
            D(i, i) = 0.0;
            for (int j = i + 1; j < spec.n; ++j) {
                double d = (Z.row(i) - Z.row(j)).norm();
                D(i, j) = d;
                D(j, i) = d;
            }
        }
        return D;
    };

    Matrix D1 = distances_at(grid[0]);
    auto degree_of = [&](double alpha) {
        double sum = 0.0;
        for (int i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.n; ++j)
                if (i != j) sum += sigmoid(alpha - D1(i, j));
        return sum / spec.n;
    };
    // sigmoid saturates well within +-50 of any relevant intercept
    double alpha = bisect_for_degree(degree_of, spec.alpha - 50.0, spec.alpha + 50.0,
                                     spec.target_degree, "latent-distance");

    GroundTruth truth;
    truth.cal_alpha = alpha;
    truth.prob.grid = grid;
    truth.prob.n = spec.n;
    truth.prob.labels = default_labels(spec.n);
    truth.prob.stage = Stage::truth;
    truth.prob.matrices.resize(spec.m);
    truth.latent.resize(spec.m);
    for (int k = 0; k < spec.m; ++k) {
        Matrix D = distances_at(grid[k]);
        Matrix P(spec.n, spec.n);
        for (int i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.n; ++j)
                P(i, j) = i == j ? 0.0 : sigmoid(alpha - D(i, j));
        truth.latent[k] = paths.positions(grid[k]);
        truth.prob.matrices[k] = std::move(P);
    }
    return truth;
}

} // namespace

std::string to_string(GenModel m) {
    switch (m) {
        case GenModel::sbm_sine: return "sbm_sine";
        case GenModel::sbm_npd: return "sbm_npd";
        case GenModel::rdpg_smooth: return "rdpg_smooth";
        case GenModel::latent_distance: return "latent_distance";
    }
    return "?";
}

GenModel gen_model_from_string(const std::string& s) {
    if (s == "sbm_sine") return GenModel::sbm_sine;
    if (s == "sbm_npd") return GenModel::sbm_npd;
    if (s == "rdpg_smooth") return GenModel::rdpg_smooth;
    if (s == "latent_distance") return GenModel::latent_distance;
    throw ValidationError("simgen: unknown model '" + s + "'");
}

void GeneratorSpec::validate() const {
    if (n < 3) throw ValidationError("simgen: need n >= 3");
    if (m < 1) throw ValidationError("simgen: need m >= 1");
    if (!(target_degree > 0.0 && target_degree < n - 1))
        throw ValidationError("simgen: target degree must lie in (0, n-1)");
    if (model == GenModel::sbm_sine || model == GenModel::sbm_npd) {
        if (communities < 1 || communities > n)
            throw ValidationError("simgen: K must lie in 1..n");
        if (!(out_in_ratio > 0.0))
            throw ValidationError("simgen: out_in_ratio must be positive");
    } else {
        if (latent_dim < 1) throw ValidationError("simgen: latent_dim must be >= 1");
    }
}

GroundTruth build_truth(const GeneratorSpec& spec) {
    spec.validate();
    GroundTruth truth;
    switch (spec.model) {
        case GenModel::sbm_sine:
        case GenModel::sbm_npd: truth = build_sbm_truth(spec); break;
        case GenModel::rdpg_smooth: truth = build_rdpg_truth(spec); break;
        case GenModel::latent_distance: truth = build_latent_distance_truth(spec); break;
    }
    truth.prob.validate(); // post-calibration [0,1] check
    return truth;
}

SnapshotSequence sample(const GeneratorSpec& spec, const GroundTruth& truth, int replicate) {
    if (truth.prob.n != spec.n || truth.prob.grid.count() != spec.m)
        throw ValidationError("simgen: truth does not match spec");
    SnapshotSequence seq;
    seq.grid = truth.prob.grid;
    seq.n = spec.n;
    seq.labels = truth.prob.labels;
    seq.adjacency.resize(spec.m);
    parallel_for(spec.m, [&](int k) {
        const Matrix& P = truth.prob.matrices[k];
        CounterStream stream(spec.seed, rng_purpose::kSampling,
                             static_cast<std::uint64_t>(replicate), k);
        Matrix A = Matrix::Zero(spec.n, spec.n);
        for (int i = 0; i < spec.n; ++i)
            for (int j = i + 1; j < spec.n; ++j) {
                double edge = stream.uniform() < P(i, j) ? 1.0 : 0.0;
                A(i, j) = edge;
                A(j, i) = edge;
            }
        seq.adjacency[k] = std::move(A);
    });
    return seq;
}

// ---------------------------------------------------------------------------
// Benchmark harness
// ---------------------------------------------------------------------------

SmoothConfig oracle_tune_reversed(const SnapshotSequence& data, const ProbMatrixSequence& truth,
                                  const CvGrid& grid, KernelKind kernel) {
    grid.validate();
    const int m = data.grid.count();

    // The neighborhood pass depends only on h2; cache it per candidate h2.
    std::vector<std::vector<Matrix>> smoothed(grid.h2s.size());
    for (std::size_t i2 = 0; i2 < grid.h2s.size(); ++i2) {
        smoothed[i2].resize(m);
        parallel_for(m, [&](int k) {
            Matrix D = pairwise_distance(data.adjacency[k]);
            NeighborhoodSet nb = build_neighborhoods(D, grid.h2s[i2]);
            smoothed[i2][k] = neighborhood_smooth(data.adjacency[k], nb);
        });
    }

    double best = std::numeric_limits<double>::infinity();
    SmoothConfig best_cfg;
    bool found = false;
    for (int ell : grid.ells) {
        for (double h1 : grid.h1s) {
            std::vector<WeightVector> weights(m);
            bool ok = true;
            for (int k = 0; k < m && ok; ++k) {
                try {
                    weights[k] =
                        weights_with_boundary_fallback(data.grid, data.grid[k], h1, ell, kernel);
                } catch (const SingularDesignError&) {
                    ok = false;
                }
            }
            if (!ok) continue;
            for (std::size_t i2 = 0; i2 < grid.h2s.size(); ++i2) {
                double sum = 0.0;
                for (int k = 0; k < m; ++k) {
                    Matrix est = weighted_matrix_sum(smoothed[i2], weights[k].weights);
                    clip_unit_interval(est);
                    sum += rel_errors(est, truth.matrices[k]).frob_rel;
                }
                double mean = sum / m;
                if (mean < best) {
                    best = mean;
                    best_cfg.ell = ell;
                    best_cfg.h1 = h1;
                    best_cfg.h2 = grid.h2s[i2];
                    best_cfg.kernel = kernel;
                    best_cfg.variant = Variant::reversed;
                    found = true;
                }
            }
        }
    }
    if (!found)
        throw SingularDesignError("simgen: no oracle candidate had a stable design");
    return best_cfg;
}

namespace {

SmoothConfig resolve_method_config(const BenchmarkMethod& method, const SnapshotSequence& data,
                                   const ProbMatrixSequence& truth) {
    switch (method.tuning) {
        case TuningMode::fixed: {
            SmoothConfig cfg = method.config;
            cfg.variant = method.variant;
            cfg.validate();
            return cfg;
        }
        case TuningMode::cv: {
            CvGrid grid = method.grid ? *method.grid : CvGrid::defaults(data.n, data.grid.count());
            if (method.variant == Variant::independent || method.variant == Variant::pooled) {
                grid.ells = {0};
                grid.h1s = {1.0}; // inert for these variants
            }
            CvReport report = cross_validate(data, grid, method.variant, method.config.kernel);
            SmoothConfig cfg = chosen_config(report);
            cfg.h3 = method.config.h3;
            return cfg;
        }
        case TuningMode::oracle: {
            if (method.variant != Variant::reversed)
                throw ValidationError("simgen: oracle tuning is reserved for the reversed baseline");
            CvGrid grid = method.grid ? *method.grid : CvGrid::defaults(data.n, data.grid.count());
            return oracle_tune_reversed(data, truth, grid, method.config.kernel);
        }
    }
    throw ValidationError("simgen: bad tuning mode");
}

} // namespace

std::vector<BenchmarkCell> run_benchmark(const BenchmarkSpec& spec) {
    spec.generator.validate();
    if (spec.replicates < 1) throw ValidationError("simgen: need at least 1 replicate");
    if (spec.methods.empty()) throw ValidationError("simgen: no methods to benchmark");

    GroundTruth truth = build_truth(spec.generator);
    const int m = spec.generator.m;
    const std::vector<double>& times = truth.prob.grid.points();
    const int n_methods = static_cast<int>(spec.methods.size());
    const int R = spec.replicates;

    // errs[r][method][k] for both metrics
    std::vector<std::vector<std::vector<ErrorRecord>>> errs(
        R, std::vector<std::vector<ErrorRecord>>(n_methods));

    parallel_for(R, [&](int r) {
        SnapshotSequence data = sample(spec.generator, truth, r);
        for (int mi = 0; mi < n_methods; ++mi) {
            const BenchmarkMethod& method = spec.methods[mi];
            SmoothConfig cfg = resolve_method_config(method, data, truth.prob);
            bool three = method.three_stage && method.variant == Variant::proposed;
            ProbMatrixSequence est = estimate(data, times, cfg, three);
            std::vector<ErrorRecord> recs(m);
            for (int k = 0; k < m; ++k)
                recs[k] = rel_errors(est.matrices[k], truth.prob.matrices[k], times[k]);
            errs[r][mi] = std::move(recs);
        }
    });

    std::vector<BenchmarkCell> cells;
    cells.reserve(n_methods * 2 * m);
    for (int mi = 0; mi < n_methods; ++mi) {
        std::string name = spec.methods[mi].name.empty() ? to_string(spec.methods[mi].variant)
                                                         : spec.methods[mi].name;
        for (const char* metric : {"frob", "two_inf"}) {
            for (int k = 0; k < m; ++k) {
                double mean = 0.0;
                for (int r = 0; r < R; ++r) {
                    double v = std::string_view(metric) == "frob" ? errs[r][mi][k].frob_rel
                                                                  : errs[r][mi][k].two_inf_rel;
                    mean += v;
                }
                mean /= R;
                double var = 0.0;
                if (R > 1) {
                    for (int r = 0; r < R; ++r) {
                        double v = std::string_view(metric) == "frob" ? errs[r][mi][k].frob_rel
                                                                      : errs[r][mi][k].two_inf_rel;
                        var += (v - mean) * (v - mean);
                    }
                    var /= (R - 1);
                }
                BenchmarkCell cell;
                cell.method = name;
                cell.metric = metric;
                cell.t = times[k];
                cell.mean_error = mean;
                cell.std_error = R > 1 ? std::sqrt(var / R) : 0.0;
                cell.replicates = R;
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

std::string benchmark_csv(const std::vector<BenchmarkCell>& cells, const std::string& model) {
    std::ostringstream out;
    out << "model,method,metric,t,mean_error,stderr,replicates\n";
    char buf[64];
    for (const BenchmarkCell& c : cells) {
        out << model << ',' << c.method << ',' << c.metric << ',';
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,", c.t, c.mean_error, c.std_error);
        out << buf << c.replicates << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// JSON codecs
// ---------------------------------------------------------------------------

GeneratorSpec generator_spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("simgen: bad generator JSON: ") + e.what());
    }
    GeneratorSpec spec;
    try {
        if (j.contains("model")) spec.model = gen_model_from_string(j["model"].get<std::string>());
        if (j.contains("n")) spec.n = j["n"].get<int>();
        if (j.contains("m")) spec.m = j["m"].get<int>();
        if (j.contains("K")) spec.communities = j["K"].get<int>();
        if (j.contains("out_in_ratio")) spec.out_in_ratio = j["out_in_ratio"].get<double>();
        if (j.contains("target_degree")) spec.target_degree = j["target_degree"].get<double>();
        if (j.contains("latent_dim")) spec.latent_dim = j["latent_dim"].get<int>();
        if (j.contains("alpha")) spec.alpha = j["alpha"].get<double>();
        if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("simgen: bad generator JSON: ") + e.what());
    }
    spec.validate();
    return spec;
}

std::string generator_spec_to_json(const GeneratorSpec& spec) {
    json j;
    j["model"] = to_string(spec.model);
    j["n"] = spec.n;
    j["m"] = spec.m;
    j["K"] = spec.communities;
    j["out_in_ratio"] = spec.out_in_ratio;
    j["target_degree"] = spec.target_degree;
    j["latent_dim"] = spec.latent_dim;
    j["alpha"] = spec.alpha;
    j["seed"] = spec.seed;
    return j.dump(2) + "\n";
}

BenchmarkSpec benchmark_spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("simgen: bad benchmark JSON: ") + e.what());
    }
    BenchmarkSpec spec;
    try {
        spec.generator = generator_spec_from_json(j.at("generator").dump());
        if (j.contains("replicates")) spec.replicates = j["replicates"].get<int>();
        for (const json& mj : j.at("methods")) {
            BenchmarkMethod method;
            method.variant = variant_from_string(mj.at("variant").get<std::string>());
            if (mj.contains("name")) method.name = mj["name"].get<std::string>();
            if (mj.contains("tuning")) {
                std::string t = mj["tuning"].get<std::string>();
                if (t == "fixed")
                    method.tuning = TuningMode::fixed;
                else if (t == "cv")
                    method.tuning = TuningMode::cv;
                else if (t == "oracle")
                    method.tuning = TuningMode::oracle;
                else
                    throw ParseError("simgen: unknown tuning mode '" + t + "'");
            }
            if (mj.contains("three_stage")) method.three_stage = mj["three_stage"].get<bool>();
            if (mj.contains("config"))
                method.config = smooth_config_from_json(mj["config"].dump());
            if (mj.contains("grid")) {
                method.grid =
                    cv_grid_from_json(mj["grid"].dump(), spec.generator.n, spec.generator.m);
            }
            spec.methods.push_back(std::move(method));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("simgen: bad benchmark JSON: ") + e.what());
    }
    return spec;
}

} // namespace tvnet
