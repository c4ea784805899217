// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0

#include "waterseeker/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

namespace waterseeker {
namespace {

constexpr double kMaxUnit = 1.0 - 0x1.0p-53;  // largest double below 1
constexpr int kMaxIter = 100000;
constexpr double kEps = 1e-16;

double require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
    return x;
}

// Series expansion of P(s,x), valid and fast for x < s+1.
double gamma_p_series(double s, double x) {
    double ap = s;
    double term = 1.0 / s;
    double sum = term;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Modified Lentz continued fraction for Q(s,x), valid for x >= s+1.
// Returns the fraction h with Q = exp(-x + s ln x - lgamma(s)) * h.
double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h;
}

// log C(w,k) + k log(gamma) + (w-k) log(1-gamma)
double log_binom_term(std::size_t w, std::int64_t k, double gamma) {
    double dw = static_cast<double>(w);
    double dk = static_cast<double>(k);
    return std::lgamma(dw + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dw - dk + 1.0) +
           dk * std::log(gamma) + (dw - dk) * std::log1p(-gamma);
}

// Sum of term ratios upward from k: 1 + r_k + r_k r_{k+1} + ... where
// r_j = t_{j+1}/t_j. Converges geometrically once k is above the mode.
double upper_sum_relative(std::size_t w, std::int64_t k, double gamma) {
    double sum = 1.0;
    double prod = 1.0;
    double comp = 0.0;  // Kahan compensation
    const double odds = gamma / (1.0 - gamma);
    for (std::int64_t j = k; j < static_cast<std::int64_t>(w); ++j) {
        prod *= static_cast<double>(w - j) / static_cast<double>(j + 1) * odds;
        double y = prod - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (prod < sum * 1e-18) break;
    }
    return sum;
}

// Sum of term ratios downward from k: 1 + r + ... with
// r_j = t_{j-1}/t_j. Converges once k is below the mode.
double lower_sum_relative(std::size_t w, std::int64_t k, double gamma) {
    double sum = 1.0;
    double prod = 1.0;
    double comp = 0.0;
    const double inv_odds = (1.0 - gamma) / gamma;
    for (std::int64_t j = k; j > 0; --j) {
        prod *= static_cast<double>(j) / static_cast<double>(w - j + 1) * inv_odds;
        double y = prod - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (prod < sum * 1e-18) break;
    }
    return sum;
}

std::once_flag g_table_cache_once;
std::mutex* g_table_cache_mutex = nullptr;
std::map<std::tuple<int, double, double, std::size_t, std::size_t>,
         std::shared_ptr<const ThresholdTable>>* g_table_cache = nullptr;

}  // namespace

double kgw_z(std::int64_t green_count, std::size_t w, double gamma) {
    if (w == 0) throw std::invalid_argument("window length must be >= 1");
    if (green_count < 0 || green_count > static_cast<std::int64_t>(w))
        throw std::invalid_argument("green_count must lie in [0, w]");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");
    double dw = static_cast<double>(w);
    return (static_cast<double>(green_count) - gamma * dw) /
           std::sqrt(gamma * (1.0 - gamma) * dw);
}

double aar_sum(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("window must be non-empty");
    double sum = 0.0;
    for (double u : values) {
        if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("aar value outside [0,1]");
        sum += -std::log1p(-std::min(u, kMaxUnit));
    }
    return sum;
}

double regularized_gamma_cdf(double s, double x) {
    require_finite(s, "shape");
    require_finite(x, "x");
    if (!(s > 0.0)) throw std::invalid_argument("shape must be > 0");
    if (x < 0.0) throw std::invalid_argument("x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return gamma_p_series(s, x);
    double log_prefactor = -x + s * std::log(x) - std::lgamma(s);
    double q = std::exp(log_prefactor) * gamma_q_cf(s, x);
    return 1.0 - q;
}

double regularized_gamma_q(double s, double x) {
    require_finite(s, "shape");
    require_finite(x, "x");
    if (!(s > 0.0)) throw std::invalid_argument("shape must be > 0");
    if (x < 0.0) throw std::invalid_argument("x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
    return std::exp(log_regularized_gamma_q(s, x));
}

double log_regularized_gamma_q(double s, double x) {
    require_finite(s, "shape");
    require_finite(x, "x");
    if (!(s > 0.0)) throw std::invalid_argument("shape must be > 0");
    if (x < 0.0) throw std::invalid_argument("x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) {
        // Q is bounded away from 0 here; the series is accurate.
        return std::log1p(-gamma_p_series(s, x));
    }
    return -x + s * std::log(x) - std::lgamma(s) + std::log(gamma_q_cf(s, x));
}

double aar_p_value(double sum_stat, std::size_t w) {
    if (w == 0) throw std::invalid_argument("window length must be >= 1");
    if (!(sum_stat >= 0.0)) throw std::invalid_argument("sum statistic must be >= 0");
    return regularized_gamma_q(static_cast<double>(w), sum_stat);
}

double log_binomial_tail(std::size_t w, double gamma, std::int64_t k) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");
    if (k <= 0) return 0.0;  // P = 1
    if (k > static_cast<std::int64_t>(w)) return -std::numeric_limits<double>::infinity();
    // Above the mode the upper-tail terms decay; sum them directly. Below it,
    // sum the (decaying) lower tail and take the complement.
    double mode = gamma * (static_cast<double>(w) + 1.0);
    if (static_cast<double>(k) >= mode) {
        return log_binom_term(w, k, gamma) + std::log(upper_sum_relative(w, k, gamma));
    }
    double log_lower =
        log_binom_term(w, k - 1, gamma) + std::log(lower_sum_relative(w, k - 1, gamma));
    // The lower tail is bounded near 1/2 here, so the complement is stable.
    return std::log1p(-std::exp(log_lower));
}

double binomial_tail(std::size_t w, double gamma, std::int64_t k) {
    if (k < 0 || k > static_cast<std::int64_t>(w))
        throw std::invalid_argument("k must lie in [0, w]");
    return std::exp(log_binomial_tail(w, gamma, k));
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0,1)");
    // Acklam's rational approximation.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step against the exact CDF.
    double err = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = err * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

std::optional<std::int64_t> kgw_min_green_count(std::size_t w, double gamma, double alpha) {
    if (w == 0) throw std::invalid_argument("window length must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    auto k = static_cast<std::int64_t>(std::ceil(gamma * static_cast<double>(w)));
    k = std::max<std::int64_t>(k, 0);
    for (; k <= static_cast<std::int64_t>(w); ++k) {
        if (binomial_tail(w, gamma, k) < alpha) return k;
    }
    return std::nullopt;
}

std::optional<double> kgw_threshold(std::size_t w, double gamma, double alpha,
                                    std::size_t clt_cutoff) {
    if (w == 0) throw std::invalid_argument("window length must be >= 1");
    if (w >= clt_cutoff) return inverse_normal_cdf(1.0 - alpha);
    auto k = kgw_min_green_count(w, gamma, alpha);
    if (!k) return std::nullopt;
    return kgw_z(*k, w, gamma);
}

double aar_threshold(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    return alpha;
}

WindowStatistic window_statistic(const ScoreStream& stream, SegmentSpan span, double gamma) {
    validate_span(span, stream.length());
    WindowStatistic stat;
    stat.scheme = stream.scheme;
    stat.window_len = span.length();
    if (stream.scheme == Scheme::kKgw) {
        std::int64_t green = 0;
        for (std::size_t i = span.start; i < span.end; ++i) green += stream.values[i] != 0.0;
        stat.raw = kgw_z(green, stat.window_len, gamma);
        stat.log_tail_prob = log_binomial_tail(stat.window_len, gamma, green);
    } else {
        stat.raw = aar_sum(std::span<const double>(stream.values).subspan(span.start,
                                                                          stat.window_len));
        stat.log_tail_prob = log_regularized_gamma_q(static_cast<double>(stat.window_len),
                                                     stat.raw);
    }
    stat.tail_prob = std::max(std::exp(stat.log_tail_prob),
                              std::numeric_limits<double>::denorm_min());
    return stat;
}

ThresholdTable ThresholdTable::build(Scheme scheme, double gamma, double alpha,
                                     std::size_t clt_cutoff, std::size_t max_window) {
    if (scheme == Scheme::kKgw && max_window < clt_cutoff)
        max_window = clt_cutoff;  // exact entries must reach the CLT hand-off
    ThresholdTable t;
    t.scheme_ = scheme;
    t.gamma_ = gamma;
    t.alpha_ = aar_threshold(alpha);  // validates alpha
    t.clt_cutoff_ = clt_cutoff;
    t.max_window_ = max_window;
    t.clt_z_ = inverse_normal_cdf(1.0 - alpha);
    t.log_alpha_ = std::log(alpha);
    t.raw_thresholds_.assign(max_window, kUndecidable);
    if (scheme == Scheme::kKgw) {
        if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");
        t.min_green_.assign(max_window, -1);
        t.min_decidable_window_ = 0;
        for (std::size_t w = 1; w <= max_window; ++w) {
            if (auto k = kgw_min_green_count(w, gamma, alpha)) {
                t.min_green_[w - 1] = *k;
                t.raw_thresholds_[w - 1] =
                    w >= clt_cutoff ? t.clt_z_ : kgw_z(*k, w, gamma);
                if (t.min_decidable_window_ == 0) t.min_decidable_window_ = w;
            }
        }
        if (t.min_decidable_window_ == 0) t.min_decidable_window_ = max_window + 1;
    } else {
        t.min_decidable_window_ = 1;
        // Raw-statistic thresholds S*(w) = GammaInv(1-alpha, w), found by
        // bisection on the monotone upper tail. Exported for reference; the
        // decision rule compares the exact tail probability against alpha.
        for (std::size_t w = 1; w <= max_window; ++w) {
            double s = static_cast<double>(w);
            double lo = s, hi = s + 10.0 * std::sqrt(s) + 20.0;
            while (log_regularized_gamma_q(s, hi) >= t.log_alpha_) hi *= 1.5;
            for (int i = 0; i < 200; ++i) {
                double mid = 0.5 * (lo + hi);
                if (log_regularized_gamma_q(s, mid) < t.log_alpha_)
                    hi = mid;
                else
                    lo = mid;
                if (hi - lo < 1e-11 * hi) break;
            }
            t.raw_thresholds_[w - 1] = 0.5 * (lo + hi);
        }
    }
    return t;
}

std::shared_ptr<const ThresholdTable> ThresholdTable::shared(Scheme scheme, double gamma,
                                                             double alpha,
                                                             std::size_t clt_cutoff,
                                                             std::size_t max_window) {
    std::call_once(g_table_cache_once, [] {
        g_table_cache_mutex = new std::mutex;
        g_table_cache = new std::map<std::tuple<int, double, double, std::size_t, std::size_t>,
                                     std::shared_ptr<const ThresholdTable>>;
    });
    auto key = std::make_tuple(static_cast<int>(scheme), gamma, alpha, clt_cutoff, max_window);
    {
        std::lock_guard<std::mutex> lock(*g_table_cache_mutex);
        auto it = g_table_cache->find(key);
        if (it != g_table_cache->end()) return it->second;
    }
    auto table = std::make_shared<const ThresholdTable>(
        build(scheme, gamma, alpha, clt_cutoff, max_window));
    std::lock_guard<std::mutex> lock(*g_table_cache_mutex);
    auto [it, inserted] = g_table_cache->emplace(key, table);
    return it->second;
}

std::optional<double> ThresholdTable::raw_threshold(std::size_t w) const {
    if (w == 0) throw std::invalid_argument("window length must be >= 1");
    if (scheme_ == Scheme::kKgw && w >= clt_cutoff_) return clt_z_;
    if (w > max_window_) {
        // Larger windows fall through to the constant rule.
        if (scheme_ == Scheme::kKgw) return clt_z_;
        return std::nullopt;  // Aar thresholds beyond the table are derived from alpha
    }
    double v = raw_thresholds_[w - 1];
    if (v == kUndecidable) return std::nullopt;
    return v;
}

std::optional<std::int64_t> ThresholdTable::min_green_count(std::size_t w) const {
    if (scheme_ != Scheme::kKgw || w == 0 || w > max_window_) return std::nullopt;
    auto k = min_green_[w - 1];
    if (k < 0) return std::nullopt;
    return k;
}

bool ThresholdTable::passes_kgw(std::size_t w, std::int64_t green_count) const {
    if (w >= clt_cutoff_) return kgw_z(green_count, w, gamma_) >= clt_z_;
    if (w > max_window_ || !decidable(w)) return false;
    return green_count >= min_green_[w - 1];
}

bool ThresholdTable::passes_aar(double log_tail) const { return log_tail < log_alpha_; }

bool ThresholdTable::passes(const WindowStatistic& stat) const {
    if (scheme_ == Scheme::kKgw) {
        if (stat.window_len >= clt_cutoff_) return stat.raw >= clt_z_;
        auto thr = raw_threshold(stat.window_len);
        return thr && stat.raw >= *thr;
    }
    return passes_aar(stat.log_tail_prob);
}

std::string ThresholdTable::to_json() const {
    nlohmann::ordered_json j;
    j["v"] = 1;
    j["scheme"] = scheme_name(scheme_);
    j["gamma"] = gamma_;
    j["alpha"] = alpha_;
    j["clt_cutoff"] = clt_cutoff_;
    j["max_window"] = max_window_;
    auto entries = nlohmann::ordered_json::array();
    for (std::size_t w = 1; w <= max_window_; ++w) {
        double v = raw_thresholds_[w - 1];
        if (v == kUndecidable) continue;
        entries.push_back({w, v});
    }
    j["entries"] = std::move(entries);
    return j.dump();
}

ThresholdTable ThresholdTable::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    if (!j.contains("v") || j["v"].get<int>() != 1)
        throw std::runtime_error("unsupported threshold table schema version");
    return build(scheme_from_name(j.at("scheme").get<std::string>()), j.at("gamma").get<double>(),
                 j.at("alpha").get<double>(), j.at("clt_cutoff").get<std::size_t>(),
                 j.at("max_window").get<std::size_t>());
}

}  // namespace waterseeker
