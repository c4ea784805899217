// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "waterseeker/types.hpp"

namespace waterseeker {

// z = (green_count - gamma*w) / sqrt(gamma*(1-gamma)*w)
double kgw_z(std::int64_t green_count, std::size_t w, double gamma);

// S = sum_i log(1/(1-u_i)). Values equal to 1 are clamped to 1 - 2^-53.
double aar_sum(std::span<const double> values);

// Regularized lower incomplete gamma P(s, x); series for x < s+1, continued
// fraction otherwise. Absolute error well below 1e-12 over the tested range.
double regularized_gamma_cdf(double s, double x);

// Upper tail Q(s, x) = 1 - P(s, x), and its natural log (stable far into the
// tail, where Q underflows a double).
double regularized_gamma_q(double s, double x);
double log_regularized_gamma_q(double s, double x);

// p-value of the Aar sum statistic over a window of length w under the null:
// 1 - P(w, sum_stat).
double aar_p_value(double sum_stat, std::size_t w);

// P(X >= k) for X ~ Binomial(w, gamma), and its natural log. Computed in log
// space from the largest term with exact term ratios.
double binomial_tail(std::size_t w, double gamma, std::int64_t k);
double log_binomial_tail(std::size_t w, double gamma, std::int64_t k);

// Inverse standard normal CDF (Acklam's rational approximation plus one
// Halley refinement against erfc).
double inverse_normal_cdf(double p);

// Minimal green count k* with binomial_tail(w, gamma, k*) < alpha, or nullopt
// when no count in [0, w] reaches the target (window undecidable).
std::optional<std::int64_t> kgw_min_green_count(std::size_t w, double gamma, double alpha);

// Raw z threshold for a window of length w. For w >= clt_cutoff this is the
// normal-approximation constant Phi^-1(1-alpha); below the cutoff it is the
// z of the exact minimal green count. nullopt when undecidable.
std::optional<double> kgw_threshold(std::size_t w, double gamma, double alpha,
                                    std::size_t clt_cutoff);

// Aar p-value threshold: p* = alpha for every window length.
double aar_threshold(double alpha);

// One window's statistic: the raw scheme statistic plus the exact null tail
// probability of a value at least this extreme. tail_prob is clamped into
// (0, 1]; log_tail_prob carries the full dynamic range for ranking.
struct WindowStatistic {
    Scheme scheme = Scheme::kKgw;
    double raw = 0.0;
    std::size_t window_len = 0;
    double tail_prob = 1.0;
    double log_tail_prob = 0.0;
};

WindowStatistic window_statistic(const ScoreStream& stream, SegmentSpan span, double gamma);

// Precomputed per-window-length decision thresholds for one
// (scheme, gamma, alpha, clt_cutoff) tuple. Immutable and shareable across
// threads after construction.
class ThresholdTable {
public:
    static ThresholdTable build(Scheme scheme, double gamma, double alpha,
                                std::size_t clt_cutoff = kDefaultCltCutoff,
                                std::size_t max_window = kDefaultMaxWindow);

    // Cached shared instance for the given parameters.
    static std::shared_ptr<const ThresholdTable> shared(Scheme scheme, double gamma, double alpha,
                                                        std::size_t clt_cutoff = kDefaultCltCutoff,
                                                        std::size_t max_window = kDefaultMaxWindow);

    static constexpr std::size_t kDefaultCltCutoff = 200;
    static constexpr std::size_t kDefaultMaxWindow = 400;

    Scheme scheme() const { return scheme_; }
    double gamma() const { return gamma_; }
    double alpha() const { return alpha_; }
    std::size_t clt_cutoff() const { return clt_cutoff_; }
    std::size_t max_window() const { return max_window_; }
    double clt_z() const { return clt_z_; }

    // Smallest window length that can reach significance alpha at all.
    std::size_t min_decidable_window() const { return min_decidable_window_; }
    bool decidable(std::size_t w) const { return w >= min_decidable_window_; }

    // Raw-statistic threshold for window length w (KGW: z*, Aar: S*).
    // nullopt when the window is undecidable.
    std::optional<double> raw_threshold(std::size_t w) const;

    // KGW fast path: minimal passing green count for w < clt_cutoff.
    std::optional<std::int64_t> min_green_count(std::size_t w) const;

    // Decision rule. KGW: z >= z*(w) below the CLT cutoff, z >= Phi^-1(1-alpha)
    // at or above it. Aar: exact tail probability below alpha.
    bool passes(const WindowStatistic& stat) const;
    bool passes_kgw(std::size_t w, std::int64_t green_count) const;
    bool passes_aar(double log_tail) const;

    // Versioned JSON form; byte-identical for identical parameters.
    std::string to_json() const;
    static ThresholdTable from_json(const std::string& text);

private:
    ThresholdTable() = default;

    Scheme scheme_ = Scheme::kKgw;
    double gamma_ = 0.5;
    double alpha_ = 1e-6;
    std::size_t clt_cutoff_ = kDefaultCltCutoff;
    std::size_t max_window_ = kDefaultMaxWindow;
    double clt_z_ = 0.0;
    double log_alpha_ = 0.0;
    std::size_t min_decidable_window_ = 1;
    // Indexed by w in [1, max_window]; entry w-1. kUndecidable marks windows
    // that cannot reach alpha.
    std::vector<double> raw_thresholds_;
    std::vector<std::int64_t> min_green_;  // KGW only
    static constexpr double kUndecidable = std::numeric_limits<double>::infinity();
};

}  // namespace waterseeker
