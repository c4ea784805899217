// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0

#include "waterseeker/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace waterseeker {
namespace {

constexpr double kMaxUnit = 1.0 - 0x1.0p-53;

// Prefix sums of green bits (KGW) or of the additive log correlation scores
// (Aar), so any window statistic is two loads and a subtraction.
struct Prefix {
    std::vector<std::int64_t> green;  // KGW
    std::vector<double> logscore;     // Aar

    explicit Prefix(const ScoreStream& s) {
        const std::size_t n = s.length();
        if (s.scheme == Scheme::kKgw) {
            green.resize(n + 1, 0);
            for (std::size_t i = 0; i < n; ++i)
                green[i + 1] = green[i] + (s.values[i] != 0.0 ? 1 : 0);
        } else {
            logscore.resize(n + 1, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                logscore[i + 1] =
                    logscore[i] - std::log1p(-std::min(s.values[i], kMaxUnit));
        }
    }

    std::int64_t greens(std::size_t a, std::size_t b) const { return green[b] - green[a]; }
    double sum(std::size_t a, std::size_t b) const { return logscore[b] - logscore[a]; }
};

struct Candidate {
    double log_tail = std::numeric_limits<double>::infinity();
    std::size_t start = 0;
    std::size_t end = 0;

    bool valid() const { return std::isfinite(log_tail); }
    std::size_t len() const { return end - start; }
};

// Ranking used inside the local traversal: most significant tail first,
// ties toward the longer span, then the smaller start.
bool traversal_better(const Candidate& a, const Candidate& b) {
    if (a.log_tail != b.log_tail) return a.log_tail < b.log_tail;
    if (a.len() != b.len()) return a.len() > b.len();
    return a.start < b.start;
}

double window_log_tail(const Prefix& p, Scheme scheme, double gamma, std::size_t s,
                       std::size_t e) {
    if (scheme == Scheme::kKgw) return log_binomial_tail(e - s, gamma, p.greens(s, e));
    return log_regularized_gamma_q(static_cast<double>(e - s), p.sum(s, e));
}

void finalize(DetectionResult& r, const ScoreStream& stream, double gamma) {
    r.has_watermark = !r.indices.empty();
    r.per_segment_stats.clear();
    r.per_segment_stats.reserve(r.indices.size());
    for (const auto& span : r.indices)
        r.per_segment_stats.push_back(window_statistic(stream, span, gamma));
}

}  // namespace

DetectionResult full_text_detect(const ScoreStream& stream, const SchemeParams& params) {
    params.validate();
    if (stream.length() == 0) throw std::invalid_argument("stream must be non-empty");
    if (params.scheme != stream.scheme)
        throw std::invalid_argument("params scheme differs from the stream scheme");
    auto table = ThresholdTable::shared(stream.scheme, params.gamma, params.alpha);
    DetectionResult result;
    result.windows_evaluated = 1;
    auto stat = window_statistic(stream, {0, stream.length()}, params.gamma);
    if (table->passes(stat)) result.indices.push_back({0, stream.length()});
    finalize(result, stream, params.gamma);
    return result;
}

DetectionResult winmax_detect(const ScoreStream& stream, const SchemeParams& params,
                              std::size_t interval) {
    params.validate();
    if (interval < 1) throw std::invalid_argument("interval must be >= 1");
    if (stream.length() == 0) throw std::invalid_argument("stream must be non-empty");
    if (params.scheme != stream.scheme)
        throw std::invalid_argument("params scheme differs from the stream scheme");
    const std::size_t n = stream.length();
    auto table = ThresholdTable::shared(stream.scheme, params.gamma, params.alpha);
    Prefix prefix(stream);

    DetectionResult result;
    // Best window so far, ranked on the scheme's cross-window score: the
    // z-score for KGW, the exact tail probability (the p-value) for Aar.
    // Iteration order (w ascending, offset ascending) plus strict improvement
    // realizes the smaller-w / smaller-start tie-break.
    double best_score = -std::numeric_limits<double>::infinity();
    std::size_t best_w = 0, best_i = 0;
    bool have_best = false;

    for (std::size_t w = 1; w <= n; w += interval) {
        if (!table->decidable(w)) continue;  // can never reach alpha
        result.windows_evaluated += n - w + 1;
        std::size_t arg = 0;
        double score;
        if (stream.scheme == Scheme::kKgw) {
            std::int64_t best_k = -1;
            for (std::size_t i = 0; i + w <= n; ++i) {
                std::int64_t k = prefix.greens(i, i + w);
                if (k > best_k) {
                    best_k = k;
                    arg = i;
                }
            }
            score = kgw_z(best_k, w, params.gamma);
        } else {
            double best_s = -1.0;
            for (std::size_t i = 0; i + w <= n; ++i) {
                double s = prefix.sum(i, i + w);
                if (s > best_s) {
                    best_s = s;
                    arg = i;
                }
            }
            score = -window_log_tail(prefix, stream.scheme, params.gamma, arg, arg + w);
        }
        if (!have_best || score > best_score) {
            have_best = true;
            best_score = score;
            best_w = w;
            best_i = arg;
        }
    }

    if (have_best) {
        WindowStatistic stat =
            window_statistic(stream, {best_i, best_i + best_w}, params.gamma);
        if (table->passes(stat)) result.indices.push_back({best_i, best_i + best_w});
    }
    finalize(result, stream, params.gamma);
    return result;
}

DetectionResult flsw_detect(const ScoreStream& stream, const SchemeParams& params,
                            std::size_t window) {
    params.validate();
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    if (window > stream.length())
        throw std::invalid_argument("window exceeds the document length");
    if (params.scheme != stream.scheme)
        throw std::invalid_argument("params scheme differs from the stream scheme");
    const std::size_t n = stream.length();
    auto table = ThresholdTable::shared(stream.scheme, params.gamma, params.alpha);
    Prefix prefix(stream);

    DetectionResult result;
    result.windows_evaluated = n - window + 1;

    std::vector<std::size_t> hits;
    if (stream.scheme == Scheme::kKgw) {
        for (std::size_t i = 0; i + window <= n; ++i)
            if (table->passes_kgw(window, prefix.greens(i, i + window))) hits.push_back(i);
    } else {
        for (std::size_t i = 0; i + window <= n; ++i) {
            double lt = log_regularized_gamma_q(static_cast<double>(window),
                                                prefix.sum(i, i + window));
            if (table->passes_aar(lt)) hits.push_back(i);
        }
    }

    // Windows [i, i+W) and [j, j+W) merge iff j <= i + W.
    std::size_t run_first = 0;
    for (std::size_t h = 0; h < hits.size(); ++h) {
        if (h > 0 && hits[h] > hits[h - 1] + window) {
            result.indices.push_back({hits[run_first], hits[h - 1] + window});
            run_first = h;
        }
    }
    if (!hits.empty()) result.indices.push_back({hits[run_first], hits.back() + window});
    finalize(result, stream, params.gamma);
    return result;
}

std::vector<SegmentSpan> waterseeker_localize(const ScoreStream& stream,
                                              const WaterSeekerConfig& cfg) {
    cfg.validate();
    const std::size_t n = stream.length();
    const std::size_t w = cfg.window;
    if (n < w) throw std::invalid_argument("stream shorter than the smoothing window");

    // Smoothed per-window means. KGW smooths the green bits; Aar smooths the
    // raw u values (bounded, which keeps the anomaly threshold stable).
    const std::size_t m = n - w + 1;
    std::vector<double> means(m);
    double acc = 0.0;
    for (std::size_t i = 0; i < w; ++i) acc += stream.values[i];
    means[0] = acc / static_cast<double>(w);
    for (std::size_t i = 1; i < m; ++i) {
        acc += stream.values[i + w - 1] - stream.values[i - 1];
        means[i] = acc / static_cast<double>(w);
    }

    double mean = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(m);
    const std::size_t k = std::min(cfg.top_k, m);
    std::vector<double> top(means);
    std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k - 1), top.end(),
                     std::greater<>());
    double top_k_mean =
        std::accumulate(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k), 0.0) /
        static_cast<double>(k);
    double threshold = mean + (top_k_mean - mean) / 2.0;

    // Connect anomalous window indices separated by at most the tolerance,
    // convert runs to token spans, drop short spans.
    std::vector<SegmentSpan> spans;
    bool in_run = false;
    std::size_t run_first = 0, run_last = 0;
    auto flush = [&] {
        if (!in_run) return;
        SegmentSpan span{run_first, run_last + w};
        if (span.length() >= cfg.min_segment_len) spans.push_back(span);
        in_run = false;
    };
    for (std::size_t i = 0; i < m; ++i) {
        if (!(means[i] > threshold)) continue;
        if (in_run && i - run_last <= cfg.connect_tolerance) {
            run_last = i;
        } else {
            flush();
            in_run = true;
            run_first = run_last = i;
        }
    }
    flush();

    // Runs closer than the window length can still yield overlapping token
    // spans when the tolerance is below W; union them.
    std::vector<SegmentSpan> merged;
    for (const auto& s : spans) {
        if (!merged.empty() && s.start < merged.back().end)
            merged.back().end = std::max(merged.back().end, s.end);
        else
            merged.push_back(s);
    }
    return merged;
}

namespace {

DetectionResult waterseeker_run(const ScoreStream& stream, const WaterSeekerConfig& cfg,
                                const SchemeParams& params, bool traverse) {
    params.validate();
    if (params.scheme != stream.scheme)
        throw std::invalid_argument("params scheme differs from the stream scheme");
    const std::size_t n = stream.length();
    const std::size_t w = cfg.window;
    auto table =
        ThresholdTable::shared(stream.scheme, cfg.gamma, cfg.alpha, cfg.kgw_clt_cutoff);

    auto localized = waterseeker_localize(stream, cfg);
    DetectionResult result;
    result.windows_evaluated = n - w + 1;
    Prefix prefix(stream);

    for (const auto& [s0, e0] : localized) {
        Candidate best;
        if (!traverse) {
            ++result.candidate_windows_evaluated;
            best = {window_log_tail(prefix, stream.scheme, cfg.gamma, s0, e0), s0, e0};
        } else {
            // Candidates: start in [s0, s0+W), end in (e0-W, e0], end > start.
            // Scanned one candidate length at a time so the tail is computed
            // once per length, at that length's best window.
            const std::size_t s_hi = std::min(s0 + w, n) - 1;           // inclusive
            const std::size_t e_lo = std::max(e0 > w ? e0 - w + 1 : 1, std::size_t{1});
            const std::size_t len_max = e0 - s0;
            for (std::size_t len = 1; len <= len_max; ++len) {
                std::size_t lo = std::max(s0, e_lo > len ? e_lo - len : 0);
                std::size_t hi = std::min(s_hi, e0 - len);
                if (lo > hi) continue;
                result.candidate_windows_evaluated += hi - lo + 1;
                if (stream.scheme == Scheme::kKgw && !table->decidable(len))
                    continue;  // cannot reach alpha; excluded from ranking
                std::size_t arg = lo;
                if (stream.scheme == Scheme::kKgw) {
                    std::int64_t best_k = -1;
                    for (std::size_t s = lo; s <= hi; ++s) {
                        std::int64_t kk = prefix.greens(s, s + len);
                        if (kk > best_k) {
                            best_k = kk;
                            arg = s;
                        }
                    }
                } else {
                    double best_s = -1.0;
                    for (std::size_t s = lo; s <= hi; ++s) {
                        double sum = prefix.sum(s, s + len);
                        if (sum > best_s) {
                            best_s = sum;
                            arg = s;
                        }
                    }
                }
                Candidate cand{window_log_tail(prefix, stream.scheme, cfg.gamma, arg, arg + len),
                               arg, arg + len};
                if (cand.valid() && (!best.valid() || traversal_better(cand, best))) best = cand;
            }
        }
        if (!best.valid()) continue;
        bool pass;
        if (stream.scheme == Scheme::kKgw)
            pass = table->passes_kgw(best.len(), prefix.greens(best.start, best.end));
        else
            pass = table->passes_aar(best.log_tail);
        if (pass) result.indices.push_back({best.start, best.end});
    }
    finalize(result, stream, cfg.gamma);
    return result;
}

}  // namespace

DetectionResult waterseeker_detect(const ScoreStream& stream, const WaterSeekerConfig& cfg,
                                   const SchemeParams& params) {
    return waterseeker_run(stream, cfg, params, /*traverse=*/true);
}

DetectionResult waterseeker_detect_without_traversal(const ScoreStream& stream,
                                                     const WaterSeekerConfig& cfg,
                                                     const SchemeParams& params) {
    return waterseeker_run(stream, cfg, params, /*traverse=*/false);
}

}  // namespace waterseeker
