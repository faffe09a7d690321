#pragma once

#include "tvnet/tuning.hpp"
#include "tvnet/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tvnet {

enum class GenModel { sbm_sine, sbm_npd, rdpg_smooth, latent_distance };

std::string to_string(GenModel m);
GenModel gen_model_from_string(const std::string& s);

/// Parametric description of one generative model on the equispaced grid
/// t_k = k/m. Scale parameters are always re-solved so that the expected
/// average node degree at t_1 hits target_degree; alpha is only the
/// starting intercept for the latent-distance calibration.
struct GeneratorSpec {
    GenModel model = GenModel::sbm_sine;
    int n = 600;
    int m = 100;
    int communities = 4;      // SBM models
    double out_in_ratio = 0.5; // b/a
    double target_degree = 50.0;
    int latent_dim = 2;       // latent models
    double alpha = 0.0;       // latent_distance intercept (pre-calibration)
    std::uint64_t seed = 0;

    void validate() const;
};

/// True probability sequence plus the latent state that produced it.
struct GroundTruth {
    ProbMatrixSequence prob;        // stage = truth, zero diagonal
    std::vector<int> community;     // SBM community of each node
    Matrix pair_trend_up;           // SBM: K x K, 1 where the trend is 1 + 0.5 sin
    std::vector<Matrix> latent;     // latent models: n x d positions per time
    double cal_a = 0.0, cal_b = 0.0; // SBM scales
    double cal_scale = 0.0;          // rdpg position multiplier
    double cal_alpha = 0.0;          // latent-distance intercept
};

GroundTruth build_truth(const GeneratorSpec& spec);

/// Bernoulli sampling of one replicate. The draw for pair (i<j) at snapshot
/// k comes from the Philox stream (seed, sampling, replicate, k), so results
/// are bitwise reproducible and independent of scheduling.
SnapshotSequence sample(const GeneratorSpec& spec, const GroundTruth& truth, int replicate);

// ---------------------------------------------------------------------------
// Benchmark harness
// ---------------------------------------------------------------------------

enum class TuningMode { fixed, cv, oracle };

struct BenchmarkMethod {
    std::string name;      // defaults to the variant name
    Variant variant = Variant::proposed;
    TuningMode tuning = TuningMode::fixed;
    SmoothConfig config;   // fixed parameters; kernel/h3 also used by cv
    std::optional<CvGrid> grid; // cv/oracle search grid (default grid if absent)
    bool three_stage = false;
};

struct BenchmarkSpec {
    GeneratorSpec generator;
    int replicates = 1;
    std::vector<BenchmarkMethod> methods;
};

/// Mean error across replicates for one (method, metric, time) cell.
struct BenchmarkCell {
    std::string method;
    std::string metric; // "frob" or "two_inf"
    double t = 0.0;
    double mean_error = 0.0;
    double std_error = 0.0;
    int replicates = 0;
};

/// Samples R replicates, tunes and runs every method at all grid times and
/// aggregates both relative error metrics against the truth.
std::vector<BenchmarkCell> run_benchmark(const BenchmarkSpec& spec);

/// CSV with columns model,method,metric,t,mean_error,stderr,replicates.
std::string benchmark_csv(const std::vector<BenchmarkCell>& cells, const std::string& model);

/// Oracle tuning for the reversed baseline: picks the grid candidate whose
/// mean relative Frobenius error against the truth is smallest.
SmoothConfig oracle_tune_reversed(const SnapshotSequence& data, const ProbMatrixSequence& truth,
                                  const CvGrid& grid, KernelKind kernel);

/// JSON codecs for the CLI config files.
GeneratorSpec generator_spec_from_json(const std::string& text);
std::string generator_spec_to_json(const GeneratorSpec& spec);
BenchmarkSpec benchmark_spec_from_json(const std::string& text);

} // namespace tvnet
