#include "tvnet/analysis.hpp"
#include "tvnet/errors.hpp"
#include "tvnet/io.hpp"
#include "tvnet/metrics.hpp"
#include "tvnet/pipeline.hpp"
#include "tvnet/simgen.hpp"
#include "tvnet/threading.hpp"
#include "tvnet/tuning.hpp"
#include "tvnet/types.hpp"
#include "tvnet/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string input;
    std::string output;
    std::string config;
    std::string party;
    std::string times = "grid";
    std::string stage = "two";
    std::string variant;
    std::string k_range = "2,3,4,5,6";
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

std::uint64_t fnv1a(const std::string& data, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Provenance record; deliberately excludes anything schedule- or
// machine-dependent so reruns with different --threads stay byte-identical.
void write_run_record(const CommonOpts& opts, const std::string& subcommand) {
    std::uint64_t h = fnv1a(subcommand);
    if (!opts.config.empty()) h = fnv1a(tvnet::read_text_file(opts.config), h);
    h = fnv1a(opts.times, h);
    h = fnv1a(opts.stage, h);
    h = fnv1a(opts.variant, h);
    h = fnv1a(opts.k_range, h);
    if (opts.seed) h = fnv1a(std::to_string(*opts.seed), h);

    json j;
    j["subcommand"] = subcommand;
    j["version"] = tvnet::kVersion;
    j["seed"] = opts.seed ? json(*opts.seed) : json(nullptr);
    j["config_hash"] = hex64(h);
    tvnet::write_text_file(fs::path(opts.output) / "run.json", j.dump(2) + "\n");
}

fs::path ensure_output_dir(const CommonOpts& opts) {
    if (opts.output.empty()) throw tvnet::ValidationError("cli: --output is required");
    fs::path dir(opts.output);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw tvnet::IoError("cli: cannot create output directory " + dir.string());
    return dir;
}

std::vector<double> parse_query_times(const std::string& spec, const tvnet::TimeGrid& grid) {
    if (spec == "grid") return grid.points();
    std::vector<double> times;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            times.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw tvnet::ParseError("cli: bad query time '" + item + "'");
        }
    }
    if (times.empty()) throw tvnet::ValidationError("cli: --times produced no query times");
    return times;
}

std::vector<int> parse_k_range(const std::string& spec) {
    std::vector<int> ks;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            ks.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw tvnet::ParseError("cli: bad K value '" + item + "'");
        }
    }
    if (ks.empty()) throw tvnet::ValidationError("cli: --k-range produced no values");
    return ks;
}

std::string fmt10(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

// --- subcommands -----------------------------------------------------------

int cmd_simulate(const CommonOpts& opts) {
    fs::path dir = ensure_output_dir(opts);
    if (opts.config.empty()) throw tvnet::ValidationError("cli: simulate needs --config");
    tvnet::GeneratorSpec spec =
        tvnet::generator_spec_from_json(tvnet::read_text_file(opts.config));
    if (opts.seed) spec.seed = *opts.seed;

    tvnet::GroundTruth truth = tvnet::build_truth(spec);
    tvnet::SnapshotSequence snaps = tvnet::sample(spec, truth, 0);
    tvnet::save_snapshots(snaps, dir / "snapshots.tsv");
    tvnet::save_prob_sequence(truth.prob, dir / "truth");

    json meta;
    meta["generator"] = json::parse(tvnet::generator_spec_to_json(spec));
    meta["calibration"] = {{"a", truth.cal_a},
                           {"b", truth.cal_b},
                           {"scale", truth.cal_scale},
                           {"alpha", truth.cal_alpha}};
    if (!truth.community.empty()) meta["community"] = truth.community;
    tvnet::write_text_file(dir / "truth.json", meta.dump(2) + "\n");
    write_run_record(opts, "simulate");
    return 0;
}

int cmd_cv(const CommonOpts& opts) {
    fs::path dir = ensure_output_dir(opts);
    if (opts.input.empty()) throw tvnet::ValidationError("cli: cv needs --input");
    tvnet::SnapshotSequence data = tvnet::load_snapshots(opts.input);

    tvnet::CvGrid grid = tvnet::CvGrid::defaults(data.n, data.grid.count());
    tvnet::KernelKind kernel = tvnet::KernelKind::tricube;
    if (!opts.config.empty()) {
        std::string text = tvnet::read_text_file(opts.config);
        grid = tvnet::cv_grid_from_json(text, data.n, data.grid.count());
        json j = json::parse(text);
        if (j.contains("kernel"))
            kernel = tvnet::kernel_from_string(j["kernel"].get<std::string>());
    }
    tvnet::Variant variant =
        opts.variant.empty() ? tvnet::Variant::proposed : tvnet::variant_from_string(opts.variant);

    tvnet::CvReport report = tvnet::cross_validate(data, grid, variant, kernel);
    tvnet::write_text_file(dir / "cv_report.json", report.to_json());
    write_run_record(opts, "cv");
    std::cout << "chosen ell=" << report.best.ell << " h1=" << report.best.h1
              << " h2=" << report.best.h2 << " err=" << report.best_err << "\n";
    return 0;
}

int cmd_fit(const CommonOpts& opts) {
    fs::path dir = ensure_output_dir(opts);
    if (opts.input.empty()) throw tvnet::ValidationError("cli: fit needs --input");
    tvnet::SnapshotSequence data = tvnet::load_snapshots(opts.input);

    tvnet::SmoothConfig cfg;
    if (!opts.config.empty())
        cfg = tvnet::smooth_config_from_json(tvnet::read_text_file(opts.config));
    if (!opts.variant.empty()) cfg.variant = tvnet::variant_from_string(opts.variant);

    bool three = false;
    if (opts.stage == "three")
        three = true;
    else if (opts.stage != "two")
        throw tvnet::ValidationError("cli: --stage must be 'two' or 'three'");

    std::vector<double> times = parse_query_times(opts.times, data.grid);
    tvnet::ProbMatrixSequence est = tvnet::estimate(data, times, cfg, three);
    tvnet::save_prob_sequence(est, dir);
    write_run_record(opts, "fit");
    return 0;
}

int cmd_benchmark(const CommonOpts& opts) {
    fs::path dir = ensure_output_dir(opts);
    if (opts.config.empty()) throw tvnet::ValidationError("cli: benchmark needs --config");
    tvnet::BenchmarkSpec spec =
        tvnet::benchmark_spec_from_json(tvnet::read_text_file(opts.config));
    if (opts.seed) spec.generator.seed = *opts.seed;

    std::vector<tvnet::BenchmarkCell> cells = tvnet::run_benchmark(spec);
    tvnet::write_text_file(dir / "benchmark.csv",
                           tvnet::benchmark_csv(cells, tvnet::to_string(spec.generator.model)));
    write_run_record(opts, "benchmark");
    return 0;
}

int cmd_cluster(const CommonOpts& opts) {
    fs::path dir = ensure_output_dir(opts);
    if (opts.input.empty()) throw tvnet::ValidationError("cli: cluster needs --input");
    tvnet::ProbMatrixSequence seq = tvnet::load_prob_sequence(opts.input);

    tvnet::Matrix D = tvnet::trajectory_dissimilarity(seq);
    tvnet::ClusterResult result = tvnet::ward_cluster(D, parse_k_range(opts.k_range));
    tvnet::write_text_file(dir / "clusters.json", result.to_json(seq.labels));

    tvnet::Matrix curves = tvnet::cluster_trajectories(seq, result.labels);
    std::ostringstream csv;
    csv << "cluster,t,mean_affiliation\n";
    for (int a = 0; a < curves.rows(); ++a)
        for (int k = 0; k < curves.cols(); ++k)
            csv << a << ',' << fmt10(seq.grid[k]) << ','
                << (std::isnan(curves(a, k)) ? "nan" : fmt10(curves(a, k))) << '\n';
    tvnet::write_text_file(dir / "curves.csv", csv.str());
    write_run_record(opts, "cluster");
    std::cout << "chosen K=" << result.chosen_k << "\n";
    return 0;
}

int cmd_polarize(const CommonOpts& opts) {
    fs::path dir = ensure_output_dir(opts);
    if (opts.input.empty()) throw tvnet::ValidationError("cli: polarize needs --input");
    if (opts.party.empty()) throw tvnet::ValidationError("cli: polarize needs --party");
    tvnet::ProbMatrixSequence seq = tvnet::load_prob_sequence(opts.input);
    tvnet::GroupPartition gp =
        tvnet::align_party_records(tvnet::load_party_tsv(opts.party), seq);

    std::vector<double> r2 = tvnet::polarization_score(seq, gp);
    std::ostringstream csv;
    csv << "t,r2\n";
    for (int k = 0; k < seq.grid.count(); ++k)
        csv << fmt10(seq.grid[k]) << ',' << (std::isnan(r2[k]) ? "nan" : fmt10(r2[k])) << '\n';
    tvnet::write_text_file(dir / "polarization.csv", csv.str());
    write_run_record(opts, "polarize");
    return 0;
}

int cmd_suggest(const CommonOpts& opts) {
    if (opts.input.empty())
        throw tvnet::ValidationError("cli: suggest-bandwidths needs --input");
    tvnet::SnapshotSequence data = tvnet::load_snapshots(opts.input);
    double beta = 1.0;
    if (!opts.config.empty()) {
        json j = json::parse(tvnet::read_text_file(opts.config));
        if (j.contains("beta")) beta = j["beta"].get<double>();
    }
    double rho = tvnet::estimate_sparsity(data);
    tvnet::BandwidthSuggestion s =
        tvnet::suggest_bandwidths(data.n, data.grid.count(), rho, beta);
    std::string text = tvnet::format_suggestion(s, data.n, data.grid.count(), rho, beta);
    std::cout << text;
    if (!opts.output.empty()) {
        fs::path dir = ensure_output_dir(opts);
        tvnet::write_text_file(dir / "suggestions.txt", text);
        write_run_record(opts, "suggest-bandwidths");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-stage smoothing estimation for time-varying networks"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string subcommand;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--input", opts.input, "input snapshots TSV or estimate directory");
        cmd->add_option("--output", opts.output, "output directory");
        cmd->add_option("--config", opts.config, "JSON config file");
        cmd->add_option("--seed", opts.seed, "seed override");
        cmd->add_option("--threads", opts.threads, "worker thread cap");
        cmd->callback([&, cmd]() { subcommand = cmd->get_name(); });
    };

    CLI::App* sim = app.add_subcommand("simulate", "sample a generative model to disk");
    add_common(sim);
    CLI::App* cv = app.add_subcommand("cv", "leave-one-time-out cross-validation");
    add_common(cv);
    cv->add_option("--variant", opts.variant, "proposed|independent|pooled");
    CLI::App* fit = app.add_subcommand("fit", "estimate probability matrices");
    add_common(fit);
    fit->add_option("--stage", opts.stage, "two|three");
    fit->add_option("--variant", opts.variant, "proposed|reversed|independent|pooled");
    fit->add_option("--times", opts.times, "'grid' or comma-separated query times");
    CLI::App* bench = app.add_subcommand("benchmark", "replicate error benchmark");
    add_common(bench);
    CLI::App* cluster = app.add_subcommand("cluster", "trajectory clustering");
    add_common(cluster);
    cluster->add_option("--k-range", opts.k_range, "candidate cluster counts");
    CLI::App* polarize = app.add_subcommand("polarize", "group-based polarization score");
    add_common(polarize);
    polarize->add_option("--party", opts.party, "party-status TSV");
    CLI::App* suggest =
        app.add_subcommand("suggest-bandwidths", "theoretical bandwidth orders");
    add_common(suggest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    tvnet::set_max_threads(opts.threads > 0
                               ? opts.threads
                               : static_cast<int>(std::thread::hardware_concurrency()));

    try {
        if (subcommand == "simulate") return cmd_simulate(opts);
        if (subcommand == "cv") return cmd_cv(opts);
        if (subcommand == "fit") return cmd_fit(opts);
        if (subcommand == "benchmark") return cmd_benchmark(opts);
        if (subcommand == "cluster") return cmd_cluster(opts);
        if (subcommand == "polarize") return cmd_polarize(opts);
        if (subcommand == "suggest-bandwidths") return cmd_suggest(opts);
        std::cerr << "error: unknown subcommand\n";
        return 2;
    } catch (const tvnet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
