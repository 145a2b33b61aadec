// Copyright 2026 The expmc Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "expmc/io.hpp"
#include "test_support.hpp"

using namespace expmc;

namespace {

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name)
        : path(std::filesystem::temp_directory_path() / ("expmc_" + name)) {}
    ~TempFile() { std::filesystem::remove(path); }
    void write(const std::string& text) const {
        std::ofstream out(path);
        out << text;
    }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("matrix market symmetric files expand to full storage") {
    TempFile f("sym.mtx");
    f.write("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 0.5\n");
    const SparseMatrix m = read_matrix_market(f.str());
    CHECK(m.nnz() == 2);
    CHECK(m.at(0, 1) == 0.5);
    CHECK(m.at(1, 0) == 0.5);
}

TEST_CASE("matrix market write/read round trip") {
    for (std::uint32_t t = 0; t < 10; ++t) {
        const SparseMatrix m = test::random_signed(25, 0.2, 101, t);
        TempFile f("rt.mtx");
        write_matrix_market(m, f.str());
        CHECK(read_matrix_market(f.str()) == m);
    }
    // symmetric writer on a symmetric matrix
    const SparseMatrix s = SparseMatrix::from_triplets(
        3, {{0, 1, 2.0}, {1, 0, 2.0}, {2, 2, -1.0}});
    TempFile f("rts.mtx");
    write_matrix_market(s, f.str(), /*symmetric=*/true);
    CHECK(read_matrix_market(f.str()) == s);
}

TEST_CASE("matrix market error paths carry line numbers") {
    TempFile pattern("pat.mtx");
    pattern.write("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 2\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(pattern.str()), doctest::Contains("pattern"),
                         std::runtime_error);

    TempFile header("hdr.mtx");
    header.write("%%NotMatrixMarket whatever\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(header.str()), doctest::Contains(":1:"),
                         std::runtime_error);

    TempFile range("rng.mtx");
    range.write("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(range.str()), doctest::Contains(":3:"),
                         std::runtime_error);

    TempFile value("val.mtx");
    value.write("%%MatrixMarket matrix coordinate real general\n% c\n2 2 1\n1 1 abc\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(value.str()), doctest::Contains(":4:"),
                         std::runtime_error);

    TempFile rect("rect.mtx");
    rect.write("%%MatrixMarket matrix coordinate real general\n2 3 1\n1 1 1.0\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(rect.str()), doctest::Contains("square"),
                         std::runtime_error);

    TempFile count("cnt.mtx");
    count.write("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n");
    CHECK_THROWS_WITH_AS(read_matrix_market(count.str()), doctest::Contains("declares"),
                         std::runtime_error);
}

TEST_CASE("vector files") {
    TempFile f("vec.txt");
    f.write("1.5 -2\n3e-4\n");
    const std::vector<double> v = read_vector(f.str());
    CHECK(v == std::vector<double>{1.5, -2.0, 3e-4});

    TempFile empty("empty.txt");
    empty.write("");
    CHECK_THROWS_WITH_AS(read_vector(empty.str()), doctest::Contains("empty"),
                         std::runtime_error);

    TempFile bad("badvec.txt");
    bad.write("1.0\nxyz\n");
    CHECK_THROWS_WITH_AS(read_vector(bad.str()), doctest::Contains(":2:"), std::runtime_error);

    // write -> read round trip
    TempFile rt("rtvec.txt");
    const std::vector<double> orig{0.1, -7.25, 3.141592653589793, 1e-300};
    write_vector(orig, rt.str());
    CHECK(read_vector(rt.str()) == orig);
}

namespace {

ResultRecord sample_record() {
    ResultRecord r;
    r.estimate = 2.718281828459045;
    r.statistical_error = 1.5e-4;
    r.bias_estimate = 3.2e-5;
    r.total_cost = 123456789;
    r.wall_time_seconds = 0.125;
    r.converged = true;
    r.levels.push_back({4, 0.0625, 1000, 2.71, 0.5, 36000});
    r.levels.push_back({5, 0.03125, 400, -0.002, 0.01, 28800});
    r.config.seed = 42;
    r.config.threads = 2;
    r.config.epsilon = 1e-3;
    r.config.beta = 1.0;
    r.config.beta_auto = false;
    r.config.l0 = 4;
    r.config.mode = "entry";
    r.config.instance = "smallw(n=1000,k=2,p=0.1,seed=1)";
    return r;
}

}  // namespace

TEST_CASE("result record json round trip") {
    const ResultRecord r = sample_record();
    const std::string text = format_result(r, ResultFormat::json);
    CHECK(parse_result(text, ResultFormat::json) == r);
}

TEST_CASE("result record csv round trip") {
    const ResultRecord r = sample_record();
    const std::string text = format_result(r, ResultFormat::csv);
    CHECK(parse_result(text, ResultFormat::csv) == r);
}

TEST_CASE("result record with no levels round trips") {
    ResultRecord r = sample_record();
    r.levels.clear();
    CHECK(parse_result(format_result(r, ResultFormat::json), ResultFormat::json) == r);
    CHECK(parse_result(format_result(r, ResultFormat::csv), ResultFormat::csv) == r);
}

TEST_CASE("NaN estimates serialize as null and force converged false") {
    MlmcResult bad;
    bad.estimate = std::nan("");
    bad.converged = true;  // make_record must override
    RunConfig cfg;
    cfg.mode = "entry";
    const ResultRecord rec = make_record(bad, 1.0, cfg, 0.0);
    CHECK_FALSE(rec.converged);
    const std::string json = format_result(rec, ResultFormat::json);
    CHECK(json.find("\"estimate\": null") != std::string::npos);
    const ResultRecord back = parse_result(json, ResultFormat::json);
    CHECK(std::isnan(back.estimate));
    CHECK_FALSE(back.converged);

    const std::string csv = format_result(rec, ResultFormat::csv);
    const ResultRecord back_csv = parse_result(csv, ResultFormat::csv);
    CHECK(std::isnan(back_csv.estimate));
}

TEST_CASE("result files write and read back") {
    const ResultRecord r = sample_record();
    TempFile f("res.json");
    write_result(r, f.str(), ResultFormat::json);
    CHECK(read_result(f.str(), ResultFormat::json) == r);
}
