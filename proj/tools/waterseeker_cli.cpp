// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line harness: corpus generation, detection runs, evaluation
// reports, false-positive-rate simulation, and scaling benchmarks.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "waterseeker/corpus.hpp"
#include "waterseeker/detectors.hpp"
#include "waterseeker/evaluation.hpp"
#include "waterseeker/rng.hpp"
#include "waterseeker/statistics.hpp"
#include "waterseeker/stream_model.hpp"

namespace ws = waterseeker;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Exit codes: 0 success, 1 usage error, 2 data error.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct DetectorSpec {
    std::string kind = "waterseeker";  // fulltext | winmax | flsw | waterseeker
    std::size_t interval = 1;          // winmax
    std::size_t window = 200;          // flsw
    ws::WaterSeekerConfig ws_cfg;
    double alpha = 1e-6;
    std::optional<double> gamma;  // absent: use each record's metadata gamma
    std::size_t clt_cutoff = ws::ThresholdTable::kDefaultCltCutoff;

    ws::SchemeParams params_for(const ws::CorpusRecord& rec) const {
        ws::SchemeParams p = rec.meta.params;
        p.scheme = rec.stream.scheme;
        p.alpha = alpha;
        if (gamma) p.gamma = *gamma;
        if (p.scheme == ws::Scheme::kKgw && !(p.gamma1 > p.gamma)) p.gamma1 = 1.0;
        return p;
    }

    ws::DetectionResult run(const ws::ScoreStream& stream, const ws::SchemeParams& params) const {
        if (kind == "fulltext") return ws::full_text_detect(stream, params);
        if (kind == "winmax") return ws::winmax_detect(stream, params, interval);
        if (kind == "flsw") return ws::flsw_detect(stream, params, window);
        if (kind == "waterseeker") {
            ws::WaterSeekerConfig cfg = ws_cfg;
            cfg.alpha = params.alpha;
            cfg.gamma = params.gamma;
            cfg.kgw_clt_cutoff = clt_cutoff;
            return ws::waterseeker_detect(stream, cfg, params);
        }
        throw UsageError("unknown detector: " + kind);
    }

    ordered_json config_json() const {
        ordered_json j;
        j["detector"] = kind;
        if (kind == "winmax") j["interval"] = interval;
        if (kind == "flsw") j["window"] = window;
        if (kind == "waterseeker") {
            j["window"] = ws_cfg.window;
            j["top_k"] = ws_cfg.top_k;
            j["connect_tolerance"] = ws_cfg.connect_tolerance;
            j["min_segment_len"] = ws_cfg.min_segment_len;
        }
        j["alpha"] = alpha;
        if (gamma)
            j["gamma"] = *gamma;
        else
            j["gamma"] = nullptr;
        j["clt_cutoff"] = clt_cutoff;
        return j;
    }
};

void add_detector_flags(CLI::App* cmd, DetectorSpec& spec) {
    cmd->add_option("--detector", spec.kind, "fulltext | winmax | flsw | waterseeker")
        ->check(CLI::IsMember({"fulltext", "winmax", "flsw", "waterseeker"}));
    cmd->add_option("--interval", spec.interval, "winmax window-size step")->check(CLI::PositiveNumber);
    cmd->add_option("--window", spec.window, "flsw fixed window length")->check(CLI::PositiveNumber);
    cmd->add_option("--ws-window", spec.ws_cfg.window, "waterseeker smoothing window");
    cmd->add_option("--top-k", spec.ws_cfg.top_k, "waterseeker top-k for the anomaly threshold");
    cmd->add_option("--tolerance", spec.ws_cfg.connect_tolerance,
                    "waterseeker fragment-connection tolerance");
    cmd->add_option("--min-seg", spec.ws_cfg.min_segment_len,
                    "waterseeker minimum localized segment length");
    cmd->add_option("--alpha", spec.alpha, "per-window false-positive target");
    cmd->add_option("--gamma", spec.gamma, "KGW green fraction (default: corpus metadata)");
    cmd->add_option("--clt-cutoff", spec.clt_cutoff,
                    "window length at which the KGW normal approximation takes over");
}

std::vector<ws::StrengthPreset> pool_from_labels(ws::Scheme scheme, double gamma, double alpha,
                                                 const std::vector<std::string>& labels) {
    auto all = ws::default_strength_pool(scheme, gamma, alpha);
    if (labels.empty()) return all;
    std::vector<ws::StrengthPreset> pool;
    for (const auto& label : labels) {
        auto it = std::find_if(all.begin(), all.end(),
                               [&](const ws::StrengthPreset& p) { return p.label == label; });
        if (it == all.end()) throw UsageError("unknown strength label: " + label);
        pool.push_back(*it);
    }
    return pool;
}

struct DocOutcome {
    std::string doc_id;
    std::optional<ws::DetectionResult> result;
    std::string error;
    double time_ms = 0.0;
};

std::vector<DocOutcome> run_detector_over(const std::vector<ws::CorpusRecord>& records,
                                          const DetectorSpec& spec, std::size_t threads) {
    std::vector<DocOutcome> outcomes(records.size());
    // Warm the shared threshold tables before timing or fanning out. Only the
    // waterseeker detector honors a non-default CLT cutoff.
    for (const auto& rec : records) {
        auto p = spec.params_for(rec);
        ws::ThresholdTable::shared(p.scheme, p.gamma, p.alpha,
                                   spec.kind == "waterseeker"
                                       ? spec.clt_cutoff
                                       : ws::ThresholdTable::kDefaultCltCutoff);
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= records.size()) return;
            const auto& rec = records[i];
            DocOutcome& out = outcomes[i];
            out.doc_id = rec.doc_id;
            auto params = spec.params_for(rec);
            auto t0 = std::chrono::steady_clock::now();
            try {
                out.result = spec.run(rec.stream, params);
            } catch (const std::exception& e) {
                out.error = e.what();
            }
            auto t1 = std::chrono::steady_clock::now();
            out.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
    };
    threads = std::max<std::size_t>(threads, 1);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return outcomes;
}

ordered_json spans_json(const std::vector<ws::SegmentSpan>& spans) {
    auto arr = ordered_json::array();
    for (const auto& s : spans) arr.push_back({s.start, s.end});
    return arr;
}

// ---------------------------------------------------------------- generate

int cmd_generate(const std::string& scheme_name, std::size_t pos, std::size_t neg,
                 std::size_t doc_len, std::size_t seg_min, std::size_t seg_max,
                 std::size_t segments, double gamma, double alpha,
                 const std::vector<std::string>& strengths, std::uint64_t seed,
                 const std::string& out_path) {
    ws::CorpusSpec spec;
    spec.scheme = ws::scheme_from_name(scheme_name);
    spec.n_positive = pos;
    spec.n_negative = neg;
    spec.doc_len = doc_len;
    spec.seg_len_min = seg_min;
    spec.seg_len_max = seg_max;
    spec.segments_per_doc = segments;
    spec.strength_pool = pool_from_labels(spec.scheme, gamma, alpha, strengths);
    spec.master_seed = seed;
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    auto records = ws::build_corpus(spec);
    ws::save_corpus(records, out_path);
    std::cout << "wrote " << records.size() << " records (" << pos << " positive, " << neg
              << " negative) to " << out_path << "\n";
    return 0;
}

// ------------------------------------------------------------------ detect

int cmd_detect(const std::string& corpus_path, const std::string& out_path,
               const DetectorSpec& spec, std::size_t threads) {
    auto records = ws::load_corpus(corpus_path);
    auto outcomes = run_detector_over(records, spec, threads);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + out_path);
    ordered_json header;
    header["v"] = 1;
    header["type"] = "header";
    header["corpus"] = corpus_path;
    header["config"] = spec.config_json();
    header["config_hash"] = hex64(fnv1a(header["config"].dump()));
    out << header.dump() << '\n';

    std::size_t flagged = 0, errors = 0;
    double total_ms = 0.0;
    for (const auto& o : outcomes) {
        ordered_json line;
        line["doc_id"] = o.doc_id;
        if (o.result) {
            line["has_watermark"] = o.result->has_watermark;
            line["indices"] = spans_json(o.result->indices);
            line["windows_evaluated"] = o.result->windows_evaluated;
            line["candidate_windows_evaluated"] = o.result->candidate_windows_evaluated;
            flagged += o.result->has_watermark;
        } else {
            line["error"] = o.error;
            ++errors;
        }
        line["time_ms"] = o.time_ms;
        total_ms += o.time_ms;
        out << line.dump() << '\n';
    }
    if (!out) throw DataError("write failed: " + out_path);
    std::cout << "detected " << flagged << "/" << outcomes.size() << " documents as watermarked";
    if (errors > 0) std::cout << " (" << errors << " documents failed)";
    std::cout << "; mean " << total_ms / std::max<std::size_t>(outcomes.size(), 1)
              << " ms/doc; results in " << out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------- evaluate

int cmd_evaluate(const std::string& results_path, const std::string& corpus_path,
                 const std::string& out_path, std::size_t threads) {
    (void)threads;  // evaluation is O(corpus); the flag is accepted for symmetry
    auto records = ws::load_corpus(corpus_path);
    std::map<std::string, const ws::CorpusRecord*> by_id;
    for (const auto& r : records) by_id[r.doc_id] = &r;

    std::ifstream in(results_path, std::ios::binary);
    if (!in) throw DataError("cannot open for reading: " + results_path);
    std::string line;
    std::size_t line_number = 0;
    ordered_json header;
    std::vector<ws::DetectionResult> results;
    std::vector<std::vector<ws::SegmentSpan>> labels;
    std::size_t errors = 0;
    double total_ms = 0.0;
    std::size_t joined = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError("results line " + std::to_string(line_number) + ": " + e.what());
        }
        if (j.contains("type") && j["type"] == "header") {
            header = j;
            continue;
        }
        auto doc_id = j.at("doc_id").get<std::string>();
        auto it = by_id.find(doc_id);
        if (it == by_id.end())
            throw DataError("results doc_id not present in corpus: " + doc_id);
        total_ms += j.value("time_ms", 0.0);
        if (j.contains("error")) {
            ++errors;
            by_id.erase(it);
            continue;
        }
        ws::DetectionResult r;
        r.has_watermark = j.at("has_watermark").get<bool>();
        for (const auto& s : j.at("indices"))
            r.indices.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
        results.push_back(std::move(r));
        labels.push_back(it->second->gold);
        ++joined;
        by_id.erase(it);
    }
    if (!by_id.empty())
        throw DataError("corpus documents missing from results, first: " +
                        by_id.begin()->first);

    auto outcome = ws::evaluate_corpus(results, labels);
    ordered_json report;
    ordered_json metadata;
    metadata["corpus"] = corpus_path;
    metadata["results"] = results_path;
    if (!header.is_null() && header.contains("config")) {
        metadata["detector"] = header["config"].value("detector", "unknown");
        metadata["config_hash"] = header.value("config_hash", "");
    }
    report["metadata"] = std::move(metadata);
    ordered_json metrics;
    metrics["documents"] = joined + errors;
    metrics["true_positive"] = outcome.true_positive;
    metrics["false_positive"] = outcome.false_positive;
    metrics["false_negative"] = outcome.false_negative;
    metrics["true_negative"] = outcome.true_negative;
    metrics["f1"] = outcome.f1;
    metrics["fpr"] = outcome.fpr;
    metrics["fnr"] = outcome.fnr;
    metrics["mean_iou"] = outcome.mean_iou;
    metrics["mean_time_ms"] = total_ms / std::max<std::size_t>(joined + errors, 1);
    metrics["errors"] = errors;
    report["metrics"] = std::move(metrics);

    std::string text = report.dump(2);
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw DataError("cannot open for writing: " + out_path);
        out << text << "\n";
        std::cout << "wrote metrics to " << out_path << "\n";
    }
    return 0;
}

// ------------------------------------------------------------ simulate-fpr

int cmd_simulate_fpr(const std::string& scheme_name, std::size_t samples, std::size_t tokens,
                     std::uint64_t seed, const DetectorSpec& spec, const std::string& out_path) {
    if (samples < 1) throw UsageError("--samples must be >= 1");
    const double alpha = spec.alpha;
    ws::SchemeParams params;
    params.scheme = ws::scheme_from_name(scheme_name);
    params.alpha = alpha;
    if (spec.gamma) params.gamma = *spec.gamma;
    ws::ThresholdTable::shared(params.scheme, params.gamma, params.alpha, spec.clt_cutoff);

    std::size_t positives = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        auto stream =
            ws::sample_null_stream(params, tokens, ws::derive_seed(seed, i));
        auto result = spec.run(stream, params);
        positives += result.has_watermark;
    }
    double fpr = static_cast<double>(positives) / static_cast<double>(samples);
    // 95% Wilson interval.
    const double z = 1.959963984540054;
    double n = static_cast<double>(samples);
    double denom = 1.0 + z * z / n;
    double center = (fpr + z * z / (2.0 * n)) / denom;
    double half = z * std::sqrt(fpr * (1.0 - fpr) / n + z * z / (4.0 * n * n)) / denom;

    ordered_json report;
    report["scheme"] = scheme_name;
    report["detector"] = spec.config_json();
    report["alpha"] = alpha;
    report["samples"] = samples;
    report["tokens_per_sample"] = tokens;
    report["seed"] = seed;
    report["false_positives"] = positives;
    report["fpr"] = fpr;
    report["wilson95_low"] = std::max(0.0, center - half);
    report["wilson95_high"] = std::min(1.0, center + half);
    std::string text = report.dump(2);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw DataError("cannot open for writing: " + out_path);
        out << text << "\n";
    }
    std::cout << text << "\n";
    return 0;
}

// ------------------------------------------------------------------- bench

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double cov = 0.0, var = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double dx = std::log(xs[i]) - mx;
        cov += dx * (std::log(ys[i]) - my);
        var += dx * dx;
    }
    return cov / var;
}

int cmd_bench(const std::vector<std::string>& detectors, std::vector<std::size_t> lengths,
              std::size_t trials, const std::string& scheme_name, std::uint64_t seed,
              const std::string& out_path) {
    if (!std::is_sorted(lengths.begin(), lengths.end()))
        throw UsageError("--lengths must be sorted ascending");
    if (lengths.empty()) throw UsageError("--lengths must be non-empty");
    auto scheme = ws::scheme_from_name(scheme_name);

    ordered_json report;
    report["scheme"] = scheme_name;
    report["trials_per_length"] = trials;
    report["seed"] = seed;
    auto det_reports = ordered_json::array();

    for (const auto& name : detectors) {
        DetectorSpec spec;
        spec.kind = name;
        // Allow "winmax-<interval>" and "flsw-<window>" shorthand.
        if (name.rfind("winmax-", 0) == 0) {
            spec.kind = "winmax";
            spec.interval = std::stoull(name.substr(7));
        } else if (name.rfind("flsw-", 0) == 0) {
            spec.kind = "flsw";
            spec.window = std::stoull(name.substr(5));
        } else if (name != "fulltext" && name != "winmax" && name != "flsw" &&
                   name != "waterseeker") {
            throw UsageError("unknown detector: " + name);
        }

        ordered_json per_n = ordered_json::array();
        std::vector<double> ns, med_times, mean_windows;
        for (std::size_t n : lengths) {
            ws::CorpusSpec cspec;
            cspec.scheme = scheme;
            cspec.n_positive = trials;
            cspec.n_negative = trials;
            cspec.doc_len = n;
            cspec.seg_len_min = std::min<std::size_t>(100, std::max<std::size_t>(n / 5, 1));
            cspec.seg_len_max = std::min<std::size_t>(400, std::max<std::size_t>(n / 2, 1));
            cspec.segments_per_doc = 1;
            cspec.strength_pool = ws::default_strength_pool(scheme);
            cspec.master_seed = ws::derive_seed(seed, n);
            auto records = ws::build_corpus(cspec);

            auto outcomes = run_detector_over(records, spec, 1);
            std::vector<double> times;
            double windows = 0.0, candidates = 0.0;
            std::vector<ws::DetectionResult> results;
            std::vector<std::vector<ws::SegmentSpan>> labels;
            for (std::size_t i = 0; i < outcomes.size(); ++i) {
                const auto& o = outcomes[i];
                if (!o.result) continue;
                times.push_back(o.time_ms);
                windows += static_cast<double>(o.result->windows_evaluated);
                candidates += static_cast<double>(o.result->candidate_windows_evaluated);
                results.push_back(*o.result);
                labels.push_back(records[i].gold);
            }
            if (times.empty()) throw DataError("benchmark produced no successful runs");
            std::sort(times.begin(), times.end());
            double median = times[times.size() / 2];
            double mean =
                std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
            auto outcome = ws::evaluate_corpus(results, labels);

            ordered_json row;
            row["n"] = n;
            row["median_time_ms"] = median;
            row["mean_time_ms"] = mean;
            row["mean_windows_evaluated"] = windows / static_cast<double>(times.size());
            row["mean_candidate_windows"] = candidates / static_cast<double>(times.size());
            row["f1"] = outcome.f1;
            row["fpr"] = outcome.fpr;
            per_n.push_back(std::move(row));

            ns.push_back(static_cast<double>(n));
            med_times.push_back(std::max(median, 1e-6));
            mean_windows.push_back(windows / static_cast<double>(times.size()));
        }

        ordered_json det;
        det["detector"] = name;
        det["per_length"] = std::move(per_n);
        if (ns.size() >= 2) {
            det["time_exponent"] = loglog_slope(ns, med_times);
            det["windows_exponent"] = loglog_slope(ns, mean_windows);
        }
        det_reports.push_back(std::move(det));
    }
    report["detectors"] = std::move(det_reports);

    std::string text = report.dump(2);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw DataError("cannot open for writing: " + out_path);
        out << text << "\n";
    }
    std::cout << text << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"watermarked-segment detection engine and simulation harness"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "build a labeled synthetic corpus");
    std::string g_scheme = "kgw", g_out = "corpus.jsonl";
    std::size_t g_pos = 300, g_neg = 300, g_doclen = 10000, g_segmin = 100, g_segmax = 400,
                g_segments = 1;
    double g_gamma = 0.5, g_alpha = 1e-6;
    std::vector<std::string> g_strengths;
    std::uint64_t g_seed = 1;
    gen->add_option("--scheme", g_scheme)->check(CLI::IsMember({"kgw", "aar"}));
    gen->add_option("--pos", g_pos, "positive documents");
    gen->add_option("--neg", g_neg, "negative documents");
    gen->add_option("--doc-len", g_doclen, "tokens per document");
    gen->add_option("--seg-min", g_segmin, "minimum segment length");
    gen->add_option("--seg-max", g_segmax, "maximum segment length");
    gen->add_option("--segments", g_segments, "watermarked segments per positive document");
    gen->add_option("--gamma", g_gamma, "KGW green fraction");
    gen->add_option("--alpha", g_alpha, "per-window false-positive target stored in metadata");
    gen->add_option("--strengths", g_strengths,
                    "subset of strong,medium,weak (default: all)")
        ->delimiter(',');
    gen->add_option("--seed", g_seed, "master seed");
    gen->add_option("--out", g_out, "output JSONL path");

    // detect
    auto* det = app.add_subcommand("detect", "run a detector over a corpus");
    std::string d_corpus, d_out = "results.jsonl";
    std::size_t d_threads = 1;
    DetectorSpec d_spec;
    det->add_option("--corpus", d_corpus, "corpus JSONL")->required();
    det->add_option("--out", d_out, "results JSONL path");
    det->add_option("--threads", d_threads, "document-level parallelism")
        ->check(CLI::PositiveNumber);
    std::uint64_t d_seed = 0;
    det->add_option("--seed", d_seed, "unused; accepted for interface uniformity");
    add_detector_flags(det, d_spec);

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "score detection results against a corpus");
    std::string e_results, e_corpus, e_out;
    std::size_t e_threads = 1;
    std::uint64_t e_seed = 0;
    eval->add_option("--results", e_results, "results JSONL")->required();
    eval->add_option("--corpus", e_corpus, "corpus JSONL")->required();
    eval->add_option("--out", e_out, "metrics JSON path (default: stdout)");
    eval->add_option("--threads", e_threads)->check(CLI::PositiveNumber);
    eval->add_option("--seed", e_seed, "unused; accepted for interface uniformity");

    // simulate-fpr
    auto* sim = app.add_subcommand("simulate-fpr",
                                   "measure the document-level false positive rate on null streams");
    std::string s_scheme = "kgw", s_out;
    std::size_t s_samples = 10000, s_tokens = 10000;
    std::uint64_t s_seed = 1;
    DetectorSpec s_spec;
    sim->add_option("--scheme", s_scheme)->check(CLI::IsMember({"kgw", "aar"}));
    sim->add_option("--samples", s_samples, "number of null documents");
    sim->add_option("--tokens", s_tokens, "tokens per document");
    sim->add_option("--seed", s_seed);
    sim->add_option("--out", s_out, "also write the JSON report here");
    add_detector_flags(sim, s_spec);

    // bench
    auto* bench = app.add_subcommand("bench", "time detectors across document lengths");
    std::vector<std::string> b_detectors{"waterseeker", "winmax-200"};
    std::vector<std::size_t> b_lengths{500, 2000, 5000, 10000};
    std::size_t b_trials = 20;
    std::string b_scheme = "kgw", b_out;
    std::uint64_t b_seed = 1;
    bench->add_option("--detectors", b_detectors,
                      "detector list; winmax-<interval> and flsw-<window> shorthand")
        ->delimiter(',');
    bench->add_option("--lengths", b_lengths, "document lengths, ascending")->delimiter(',');
    bench->add_option("--trials", b_trials, "positive and negative documents per length");
    bench->add_option("--scheme", b_scheme)->check(CLI::IsMember({"kgw", "aar"}));
    bench->add_option("--seed", b_seed);
    bench->add_option("--out", b_out, "also write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed())
            return cmd_generate(g_scheme, g_pos, g_neg, g_doclen, g_segmin, g_segmax, g_segments,
                                g_gamma, g_alpha, g_strengths, g_seed, g_out);
        if (det->parsed()) return cmd_detect(d_corpus, d_out, d_spec, d_threads);
        if (eval->parsed()) return cmd_evaluate(e_results, e_corpus, e_out, e_threads);
        if (sim->parsed())
            return cmd_simulate_fpr(s_scheme, s_samples, s_tokens, s_seed, s_spec, s_out);
        if (bench->parsed())
            return cmd_bench(b_detectors, b_lengths, b_trials, b_scheme, b_seed, b_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ws::CorpusError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
