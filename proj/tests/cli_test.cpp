// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the command-line harness.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "waterseeker/corpus.hpp"

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

std::string cli() { return WATERSEEKER_CLI_PATH; }

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    static int counter = 0;
    auto out_path =
        (fs::temp_directory_path() / ("ws_cli_out_" + std::to_string(counter++) + ".txt"))
            .string();
    std::string cmd = cli() + " " + args + " >" + out_path + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream in(out_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.stdout_text = ss.str();
    std::remove(out_path.c_str());
    return r;
}

std::string tmp(const std::string& name) {
    return (fs::temp_directory_path() / name).string();
}

std::size_t count_lines(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++n;
    return n;
}

}  // namespace

TEST_CASE("generate/detect/evaluate pipeline on a strong corpus") {
    auto corpus = tmp("ws_cli_corpus.jsonl");
    auto results = tmp("ws_cli_results.jsonl");
    auto metrics = tmp("ws_cli_metrics.json");

    auto gen = run("generate --scheme kgw --pos 8 --neg 8 --doc-len 3000 --strengths strong "
                   "--seed 7 --out " + corpus);
    CHECK(gen.exit_code == 0);
    CHECK(count_lines(corpus) == 16);

    auto det = run("detect --corpus " + corpus + " --detector waterseeker --threads 2 --out " +
                   results);
    CHECK(det.exit_code == 0);
    CHECK(count_lines(results) == 17);  // header + one line per document

    auto eval = run("evaluate --results " + results + " --corpus " + corpus + " --out " + metrics);
    CHECK(eval.exit_code == 0);
    std::ifstream in(metrics);
    json report = json::parse(in);
    CHECK(report["metrics"]["documents"] == 16);
    CHECK(report["metrics"]["f1"].get<double>() > 0.85);
    CHECK(report["metrics"]["fpr"].get<double>() <= 0.25);
    CHECK(report["metadata"]["detector"] == "waterseeker");

    // Determinism of repeated detection runs: identical classification lines.
    auto results2 = tmp("ws_cli_results2.jsonl");
    auto det2 = run("detect --corpus " + corpus + " --detector winmax --interval 200 --out " +
                    results2);
    CHECK(det2.exit_code == 0);
    auto results3 = tmp("ws_cli_results3.jsonl");
    auto det3 = run("detect --corpus " + corpus + " --detector winmax --interval 200 --out " +
                    results3);
    CHECK(det3.exit_code == 0);
    std::ifstream a(results2), b(results3);
    std::string la, lb;
    while (std::getline(a, la) && std::getline(b, lb)) {
        auto ja = json::parse(la);
        auto jb = json::parse(lb);
        if (ja.contains("doc_id")) {
            CHECK(ja["doc_id"] == jb["doc_id"]);
            CHECK(ja["has_watermark"] == jb["has_watermark"]);
            CHECK(ja["indices"] == jb["indices"]);
            CHECK(ja["windows_evaluated"] == jb["windows_evaluated"]);
        }
    }

    std::remove(corpus.c_str());
    std::remove(results.c_str());
    std::remove(results2.c_str());
    std::remove(results3.c_str());
    std::remove(metrics.c_str());
}

TEST_CASE("flsw with an oversized window surfaces per-document errors and continues") {
    auto corpus = tmp("ws_cli_small_corpus.jsonl");
    auto results = tmp("ws_cli_flsw_results.jsonl");
    auto gen = run("generate --scheme kgw --pos 2 --neg 2 --doc-len 1000 --seg-min 100 "
                   "--seg-max 300 --seed 3 --out " + corpus);
    REQUIRE(gen.exit_code == 0);
    auto det = run("detect --corpus " + corpus + " --detector flsw --window 20000 --out " +
                   results);
    CHECK(det.exit_code == 0);  // run continues; summary counts the failures
    CHECK(det.stdout_text.find("4 documents failed") != std::string::npos);
    std::ifstream in(results);
    std::string line;
    std::size_t errors = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = json::parse(line);
        if (j.contains("error")) ++errors;
    }
    CHECK(errors == 4);
    std::remove(corpus.c_str());
    std::remove(results.c_str());
}

TEST_CASE("usage and data errors map to distinct exit codes") {
    CHECK(run("detect --corpus nowhere.jsonl --detector nosuch").exit_code == 1);
    CHECK(run("frobnicate").exit_code == 1);
    CHECK(run("detect --corpus /nonexistent/corpus.jsonl --detector waterseeker").exit_code == 2);

    auto bad = tmp("ws_cli_bad_corpus.jsonl");
    {
        std::ofstream out(bad);
        out << "{not json}\n";
    }
    auto r = run("detect --corpus " + bad + " --detector waterseeker");
    CHECK(r.exit_code == 2);
    CHECK(r.stdout_text.find("line 1") != std::string::npos);
    std::remove(bad.c_str());

    // Results that do not join 1:1 with the corpus are a data error.
    auto corpus = tmp("ws_cli_join_corpus.jsonl");
    auto gen = run("generate --scheme kgw --pos 1 --neg 1 --doc-len 600 --seg-min 100 "
                   "--seg-max 200 --seed 5 --out " + corpus);
    REQUIRE(gen.exit_code == 0);
    auto results = tmp("ws_cli_join_results.jsonl");
    {
        std::ofstream out(results);
        out << R"({"doc_id":"doc-000000","has_watermark":false,"indices":[],"time_ms":0})"
            << "\n";  // second document missing
    }
    CHECK(run("evaluate --results " + results + " --corpus " + corpus).exit_code == 2);
    std::remove(corpus.c_str());
    std::remove(results.c_str());
}

TEST_CASE("invalid generate flags exit with a usage error") {
    auto r = run("generate --scheme kgw --pos 2 --neg 0 --doc-len 100 --seg-min 300 "
                 "--seg-max 400 --out " + tmp("ws_cli_never.jsonl"));
    CHECK(r.exit_code == 1);
    CHECK(r.stdout_text.find("error") != std::string::npos);
}

TEST_CASE("simulate-fpr emits a rate with a Wilson interval") {
    auto r = run("simulate-fpr --scheme kgw --alpha 0.001 --samples 40 --tokens 1500 "
                 "--seed 11 --detector waterseeker");
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.stdout_text);
    CHECK(j["samples"] == 40);
    CHECK(j["fpr"].get<double>() >= 0.0);
    CHECK(j["wilson95_high"].get<double>() >= j["fpr"].get<double>());
    CHECK(j["wilson95_low"].get<double>() <= j["fpr"].get<double>());
}

TEST_CASE("bench reports counters, timings and fitted exponents") {
    auto out = tmp("ws_cli_bench.json");
    auto r = run("bench --detectors waterseeker,winmax-100 --lengths 500,1000 --trials 3 "
                 "--seed 13 --out " + out);
    REQUIRE(r.exit_code == 0);
    std::ifstream in(out);
    auto j = json::parse(in);
    REQUIRE(j["detectors"].size() == 2);
    for (const auto& det : j["detectors"]) {
        CHECK(det["per_length"].size() == 2);
        for (const auto& row : det["per_length"]) {
            CHECK(row["mean_windows_evaluated"].get<double>() > 0.0);
            CHECK(row["median_time_ms"].get<double>() >= 0.0);
        }
        CHECK(det.contains("windows_exponent"));
        CHECK(det.contains("time_exponent"));
    }
    // The waterseeker scan counter is content independent: N - W + 1.
    CHECK(j["detectors"][0]["per_length"][0]["mean_windows_evaluated"].get<double>() ==
          doctest::Approx(451.0));
    CHECK(run("bench --lengths 1000,500 --trials 1").exit_code == 1);  // not ascending touches
    std::remove(out.c_str());
}
