// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include "expmc/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace expmc {

namespace {

[[noreturn]] void fail_at(const std::string& path, std::size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_double(const std::string& tok, const std::string& path, std::size_t line) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        fail_at(path, line, "expected a real number, got '" + tok + "'");
    return v;
}

index_t parse_index(const std::string& tok, const std::string& path, std::size_t line) {
    index_t v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        fail_at(path, line, "expected an integer, got '" + tok + "'");
    return v;
}

std::string fmt_double(double v) {
    if (std::isnan(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_result_double(const std::string& tok) {
    if (tok == "null" || tok.empty()) return std::nan("");
    return std::strtod(tok.c_str(), nullptr);
}

}  // namespace

SparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");

    std::string header;
    std::size_t lineno = 1;
    if (!std::getline(in, header)) fail_at(path, 1, "empty file");
    const std::vector<std::string> h = split_ws(header);
    if (h.size() < 5 || lower(h[0]) != "%%matrixmarket" || lower(h[1]) != "matrix")
        fail_at(path, 1, "malformed Matrix Market header");
    if (lower(h[2]) != "coordinate") fail_at(path, 1, "only coordinate format is supported");
    const std::string field = lower(h[3]);
    if (field == "pattern") fail_at(path, 1, "pattern files carry no values: unsupported");
    if (field != "real") fail_at(path, 1, "only real matrices are supported");
    const std::string symmetry = lower(h[4]);
    if (symmetry != "general" && symmetry != "symmetric")
        fail_at(path, 1, "only general or symmetric symmetry is supported");
    const bool symmetric = symmetry == "symmetric";

    std::string line;
    index_t rows = 0, cols = 0, declared = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        const auto toks = split_ws(line);
        if (toks.size() != 3) fail_at(path, lineno, "expected 'rows cols nnz'");
        rows = parse_index(toks[0], path, lineno);
        cols = parse_index(toks[1], path, lineno);
        declared = parse_index(toks[2], path, lineno);
        break;
    }
    if (rows <= 0 || cols <= 0) fail_at(path, lineno, "missing or invalid size line");
    if (rows != cols)
        fail_at(path, lineno, "matrix is not square (" + std::to_string(rows) + "x" +
                                  std::to_string(cols) + ")");

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(declared) * (symmetric ? 2 : 1));
    index_t seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        const auto toks = split_ws(line);
        if (toks.size() != 3) fail_at(path, lineno, "expected 'i j value'");
        const index_t i = parse_index(toks[0], path, lineno);
        const index_t j = parse_index(toks[1], path, lineno);
        const double v = parse_double(toks[2], path, lineno);
        if (i < 1 || i > rows || j < 1 || j > cols)
            fail_at(path, lineno, "index (" + toks[0] + ", " + toks[1] + ") outside 1.." +
                                      std::to_string(rows));
        if (!std::isfinite(v)) fail_at(path, lineno, "value is NaN or Inf");
        trips.push_back({i - 1, j - 1, v});
        if (symmetric && i != j) trips.push_back({j - 1, i - 1, v});
        ++seen;
    }
    if (seen != declared)
        fail_at(path, lineno, "file declares " + std::to_string(declared) + " entries but has " +
                                  std::to_string(seen));
    return SparseMatrix::from_triplets(rows, std::move(trips));
}

void write_matrix_market(const SparseMatrix& m, const std::string& path, bool symmetric) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general")
        << "\n";

    index_t count = 0;
    for (index_t i = 0; i < m.size(); ++i) {
        const auto cols = m.row_cols(i);
        for (index_t j : cols)
            if (!symmetric || j <= i) ++count;
    }
    out << m.size() << " " << m.size() << " " << count << "\n";
    for (index_t i = 0; i < m.size(); ++i) {
        const auto cols = m.row_cols(i);
        const auto vals = m.row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (symmetric && cols[k] > i) continue;
            out << (i + 1) << " " << (cols[k] + 1) << " " << fmt_double(vals[k]) << "\n";
        }
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<double> read_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<double> v;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line[0] == '%') continue;
        for (const std::string& tok : split_ws(line)) v.push_back(parse_double(tok, path, lineno));
    }
    if (v.empty()) throw std::runtime_error(path + ": empty vector file");
    return v;
}

void write_vector(std::span<const double> v, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    for (double x : v) out << fmt_double(x) << "\n";
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

ResultRecord make_record(const MlmcResult& result, double beta, const RunConfig& config,
                         double wall_seconds) {
    ResultRecord rec;
    rec.estimate = result.estimate;
    rec.statistical_error = result.statistical_error;
    rec.bias_estimate = result.bias_estimate;
    rec.total_cost = result.total_cost;
    rec.wall_time_seconds = wall_seconds;
    rec.converged = result.converged;
    for (const LevelStats& ls : result.levels) {
        ResultLevelRow row;
        row.level = ls.level;
        row.dt = beta / static_cast<double>(index_t{1} << ls.level);
        row.samples = ls.samples;
        row.mean = ls.mean();
        row.variance = ls.variance();
        row.cost = ls.cost;
        rec.levels.push_back(row);
    }
    rec.config = config;
    if (!std::isfinite(rec.estimate) || !std::isfinite(rec.statistical_error) ||
        !std::isfinite(rec.bias_estimate))
        rec.converged = false;
    return rec;
}

namespace {

nlohmann::ordered_json config_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["epsilon"] = c.epsilon;
    j["beta"] = c.beta;
    j["beta_auto"] = c.beta_auto;
    j["l0"] = c.l0;
    j["mode"] = c.mode;
    j["instance"] = c.instance;
    return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.seed = j.at("seed").get<std::uint64_t>();
    c.threads = j.at("threads").get<int>();
    c.epsilon = j.at("epsilon").get<double>();
    c.beta = j.at("beta").is_null() ? std::nan("") : j.at("beta").get<double>();
    c.beta_auto = j.at("beta_auto").get<bool>();
    c.l0 = j.at("l0").get<int>();
    c.mode = j.at("mode").get<std::string>();
    c.instance = j.at("instance").get<std::string>();
    return c;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

// Splits one CSV line honouring double-quoted fields.
std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

const char* kCsvHeader =
    "estimate,statistical_error,bias_estimate,total_cost,wall_time_seconds,converged,"
    "seed,threads,epsilon,beta,beta_auto,l0,mode,instance,"
    "level,dt,samples,mean,variance,cost";

}  // namespace

std::string format_result(const ResultRecord& r, ResultFormat format) {
    if (format == ResultFormat::json) {
        nlohmann::ordered_json j;
        j["estimate"] = r.estimate;
        j["statistical_error"] = r.statistical_error;
        j["bias_estimate"] = r.bias_estimate;
        j["total_cost"] = r.total_cost;
        j["wall_time_seconds"] = r.wall_time_seconds;
        j["converged"] = r.converged;
        j["levels"] = nlohmann::ordered_json::array();
        for (const ResultLevelRow& row : r.levels) {
            nlohmann::ordered_json lj;
            lj["level"] = row.level;
            lj["dt"] = row.dt;
            lj["samples"] = row.samples;
            lj["mean"] = row.mean;
            lj["variance"] = row.variance;
            lj["cost"] = row.cost;
            j["levels"].push_back(lj);
        }
        j["config"] = config_json(r.config);
        return j.dump(2) + "\n";
    }

    std::string out = kCsvHeader;
    out += "\n";
    const std::string scalars = fmt_double(r.estimate) + "," + fmt_double(r.statistical_error) +
                                "," + fmt_double(r.bias_estimate) + "," +
                                std::to_string(r.total_cost) + "," +
                                fmt_double(r.wall_time_seconds) + "," +
                                (r.converged ? "true" : "false") + "," +
                                std::to_string(r.config.seed) + "," +
                                std::to_string(r.config.threads) + "," +
                                fmt_double(r.config.epsilon) + "," + fmt_double(r.config.beta) +
                                "," + (r.config.beta_auto ? "true" : "false") + "," +
                                std::to_string(r.config.l0) + "," + csv_quote(r.config.mode) +
                                "," + csv_quote(r.config.instance);
    if (r.levels.empty()) {
        out += scalars + ",,,,,,\n";
    } else {
        for (const ResultLevelRow& row : r.levels) {
            out += scalars + "," + std::to_string(row.level) + "," + fmt_double(row.dt) + "," +
                   std::to_string(row.samples) + "," + fmt_double(row.mean) + "," +
                   fmt_double(row.variance) + "," + std::to_string(row.cost) + "\n";
        }
    }
    return out;
}

ResultRecord parse_result(const std::string& text, ResultFormat format) {
    ResultRecord r;
    if (format == ResultFormat::json) {
        const nlohmann::json j = nlohmann::json::parse(text);
        r.estimate = j.at("estimate").is_null() ? std::nan("") : j.at("estimate").get<double>();
        r.statistical_error = j.at("statistical_error").is_null()
                                  ? std::nan("")
                                  : j.at("statistical_error").get<double>();
        r.bias_estimate =
            j.at("bias_estimate").is_null() ? std::nan("") : j.at("bias_estimate").get<double>();
        r.total_cost = j.at("total_cost").get<std::uint64_t>();
        r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
        r.converged = j.at("converged").get<bool>();
        for (const auto& lj : j.at("levels")) {
            ResultLevelRow row;
            row.level = lj.at("level").get<int>();
            row.dt = lj.at("dt").get<double>();
            row.samples = lj.at("samples").get<std::uint64_t>();
            row.mean = lj.at("mean").get<double>();
            row.variance = lj.at("variance").get<double>();
            row.cost = lj.at("cost").get<std::uint64_t>();
            r.levels.push_back(row);
        }
        r.config = config_from_json(j.at("config"));
        return r;
    }

    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::runtime_error("unexpected CSV header");
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = csv_split(line);
        if (f.size() != 20) throw std::runtime_error("malformed CSV row");
        if (first) {
            r.estimate = parse_result_double(f[0]);
            r.statistical_error = parse_result_double(f[1]);
            r.bias_estimate = parse_result_double(f[2]);
            r.total_cost = std::stoull(f[3]);
            r.wall_time_seconds = parse_result_double(f[4]);
            r.converged = f[5] == "true";
            r.config.seed = std::stoull(f[6]);
            r.config.threads = std::stoi(f[7]);
            r.config.epsilon = parse_result_double(f[8]);
            r.config.beta = parse_result_double(f[9]);
            r.config.beta_auto = f[10] == "true";
            r.config.l0 = std::stoi(f[11]);
            r.config.mode = f[12];
            r.config.instance = f[13];
            first = false;
        }
        if (f[14].empty()) continue;  // scalar-only row (no levels)
        ResultLevelRow row;
        row.level = std::stoi(f[14]);
        row.dt = parse_result_double(f[15]);
        row.samples = std::stoull(f[16]);
        row.mean = parse_result_double(f[17]);
        row.variance = parse_result_double(f[18]);
        row.cost = std::stoull(f[19]);
        r.levels.push_back(row);
    }
    if (first) throw std::runtime_error("CSV has no data rows");
    return r;
}

void write_result(const ResultRecord& record, const std::string& path, ResultFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << format_result(record, format);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

ResultRecord read_result(const std::string& path, ResultFormat format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_result(ss.str(), format);
}

}  // namespace expmc
