#include "tvnet/io.hpp"

#include "tvnet/errors.hpp"
#include "tvnet/version.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

using nlohmann::json;

namespace tvnet {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_time(const std::string& s, int lineno) {
    try {
        std::size_t consumed = 0;
        double t = std::stod(s, &consumed);
        if (consumed != s.size()) throw std::invalid_argument(s);
        if (!std::isfinite(t)) throw std::invalid_argument(s);
        return t;
    } catch (const std::exception&) {
        throw ParseError("net-core: line " + std::to_string(lineno) + ": bad time value '" + s +
                         "'");
    }
}

std::string fmt_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_prob(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

} // namespace

SnapshotSequence load_snapshots(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("net-core: cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw ParseError("net-core: " + path.string() + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_tabs(line) != std::vector<std::string>{"time", "node_u", "node_v"})
        throw ParseError("net-core: expected header 'time\\tnode_u\\tnode_v' in " +
                         path.string());

    struct Edge {
        int u, v;
    };
    std::map<double, std::vector<Edge>> by_time; // sorted raw times
    std::vector<std::string> labels;
    std::unordered_map<std::string, int> index;
    auto intern = [&](const std::string& name) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(labels.size());
        labels.push_back(name);
        index.emplace(name, id);
        return id;
    };

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() == 1) {
            // bare time: declares a snapshot with no edges
            by_time.try_emplace(parse_time(fields[0], lineno));
            continue;
        }
        if (fields.size() != 3)
            throw ParseError("net-core: line " + std::to_string(lineno) +
                             ": expected 3 tab-separated fields");
        double t = parse_time(fields[0], lineno);
        if (fields[1].empty() || fields[2].empty())
            throw ParseError("net-core: line " + std::to_string(lineno) + ": empty node label");
        if (fields[1] == fields[2])
            throw ValidationError("net-core: line " + std::to_string(lineno) + ": self-loop on '" +
                                  fields[1] + "'");
        int u = intern(fields[1]);
        int v = intern(fields[2]);
        by_time[t].push_back({u, v});
    }
    if (by_time.empty()) throw ParseError("net-core: " + path.string() + " has no snapshots");

    // Unit times are used directly; anything else must be integer years,
    // rescaled affinely onto [0,1].
    double raw_min = by_time.begin()->first;
    double raw_max = by_time.rbegin()->first;
    bool unit = raw_min >= 0.0 && raw_max <= 1.0;
    std::optional<YearMapping> mapping;
    if (!unit) {
        for (const auto& [t, _] : by_time)
            if (t != std::floor(t))
                throw ParseError("net-core: time " + fmt_full(t) +
                                 " is neither in [0,1] nor an integer year");
        if (raw_min == raw_max)
            throw ParseError("net-core: cannot rescale a single year to [0,1]");
        mapping = YearMapping{raw_min, raw_max};
    }

    SnapshotSequence seq;
    seq.n = static_cast<int>(labels.size());
    seq.labels = std::move(labels);
    seq.time_mapping = mapping;
    std::vector<double> times;
    for (const auto& [raw, edges] : by_time) {
        times.push_back(mapping ? mapping->to_unit(raw) : raw);
        Matrix A = Matrix::Zero(seq.n, seq.n);
        for (const Edge& e : edges) {
            A(e.u, e.v) = 1.0;
            A(e.v, e.u) = 1.0;
        }
        seq.adjacency.push_back(std::move(A));
    }
    seq.grid = TimeGrid(std::move(times));
    seq.validate();
    return seq;
}

void save_snapshots(const SnapshotSequence& seq, const std::filesystem::path& path) {
    seq.validate();
    std::ostringstream out;
    out << "time\tnode_u\tnode_v\n";
    for (int k = 0; k < seq.grid.count(); ++k) {
        const Matrix& A = seq.adjacency[k];
        std::string ts = fmt_full(seq.grid[k]);
        bool any = false;
        for (int i = 0; i < seq.n; ++i)
            for (int j = i + 1; j < seq.n; ++j)
                if (A(i, j) != 0.0) {
                    out << ts << '\t' << seq.labels[i] << '\t' << seq.labels[j] << '\n';
                    any = true;
                }
        if (!any) out << ts << '\n';
    }
    write_text_file(path, out.str());
}

std::filesystem::path save_prob_sequence(const ProbMatrixSequence& seq,
                                         const std::filesystem::path& dir) {
    seq.validate();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("net-core: cannot create directory " + dir.string());

    json manifest;
    manifest["version"] = kVersion;
    manifest["n"] = seq.n;
    manifest["labels"] = seq.labels;
    manifest["stage"] = to_string(seq.stage);
    manifest["precision"] = 10;
    json times = json::array();
    for (double t : seq.grid.points()) times.push_back(t);
    manifest["times"] = times;
    if (seq.time_mapping) {
        manifest["time_mapping"] = {{"raw_min", seq.time_mapping->raw_min},
                                    {"raw_max", seq.time_mapping->raw_max}};
    }
    json files = json::array();
    for (int k = 0; k < seq.grid.count(); ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "P_%04d.csv", k);
        files.push_back(name);
        std::ostringstream csv;
        const Matrix& P = seq.matrices[k];
        for (int i = 0; i < seq.n; ++i) {
            for (int j = 0; j < seq.n; ++j) {
                if (j) csv << ',';
                csv << fmt_prob(P(i, j));
            }
            csv << '\n';
        }
        write_text_file(dir / name, csv.str());
    }
    manifest["files"] = files;
    auto manifest_path = dir / "manifest.json";
    write_text_file(manifest_path, manifest.dump(2) + "\n");
    return manifest_path;
}

ProbMatrixSequence load_prob_sequence(const std::filesystem::path& dir) {
    json manifest;
    try {
        manifest = json::parse(read_text_file(dir / "manifest.json"));
    } catch (const json::exception& e) {
        throw ParseError("net-core: bad manifest in " + dir.string() + ": " + e.what());
    }
    ProbMatrixSequence seq;
    try {
        seq.n = manifest.at("n").get<int>();
        seq.labels = manifest.at("labels").get<std::vector<std::string>>();
        seq.stage = stage_from_string(manifest.at("stage").get<std::string>());
        seq.grid = TimeGrid(manifest.at("times").get<std::vector<double>>());
        if (manifest.contains("time_mapping")) {
            seq.time_mapping = YearMapping{manifest["time_mapping"].at("raw_min").get<double>(),
                                           manifest["time_mapping"].at("raw_max").get<double>()};
        }
        for (const auto& name : manifest.at("files")) {
            std::ifstream in(dir / name.get<std::string>());
            if (!in) throw IoError("net-core: missing " + name.get<std::string>());
            Matrix P(seq.n, seq.n);
            std::string line;
            for (int i = 0; i < seq.n; ++i) {
                if (!std::getline(in, line))
                    throw ParseError("net-core: truncated " + name.get<std::string>());
                std::stringstream row(line);
                std::string cell;
                for (int j = 0; j < seq.n; ++j) {
                    if (!std::getline(row, cell, ','))
                        throw ParseError("net-core: short row in " + name.get<std::string>());
                    try {
                        P(i, j) = std::stod(cell);
                    } catch (const std::exception&) {
                        throw ParseError("net-core: bad value '" + cell + "' in " +
                                         name.get<std::string>());
                    }
                }
            }
            seq.matrices.push_back(std::move(P));
        }
    } catch (const json::exception& e) {
        throw ParseError("net-core: bad manifest in " + dir.string() + ": " + e.what());
    }
    seq.validate();
    return seq;
}

std::vector<PartyRecord> load_party_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("analysis: cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("analysis: " + path.string() + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_tabs(line) != std::vector<std::string>{"time", "node", "category"})
        throw ParseError("analysis: expected header 'time\\tnode\\tcategory' in " +
                         path.string());
    std::vector<PartyRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() != 3)
            throw ParseError("analysis: line " + std::to_string(lineno) +
                             ": expected 3 tab-separated fields");
        if (fields[1].empty() || fields[2].empty())
            throw ParseError("analysis: line " + std::to_string(lineno) + ": empty field");
        out.push_back({parse_time(fields[0], lineno), fields[1], fields[2]});
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("io: cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("io: write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("io: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace tvnet
