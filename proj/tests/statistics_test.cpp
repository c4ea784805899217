// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0

#include "waterseeker/statistics.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "waterseeker/rng.hpp"
#include "waterseeker/stream_model.hpp"

using namespace waterseeker;

TEST_CASE("kgw_z basic values") {
    CHECK(kgw_z(50, 100, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(kgw_z(75, 100, 0.5) == doctest::Approx(5.0).epsilon(1e-12));
    // (42 - 25) / sqrt(12.5)
    CHECK(kgw_z(42, 50, 0.5) == doctest::Approx(4.808326112068523).epsilon(1e-12));
    CHECK_THROWS_AS(kgw_z(1, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(kgw_z(11, 10, 0.5), std::invalid_argument);
}

TEST_CASE("aar_sum basic values and clamping") {
    std::vector<double> zeros(7, 0.0);
    CHECK(aar_sum(zeros) == doctest::Approx(0.0));
    std::vector<double> one{1.0 - std::exp(-1.0)};
    CHECK(aar_sum(one) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> halves(100, 0.5);
    CHECK(aar_sum(halves) == doctest::Approx(69.31471805599453).epsilon(1e-12));
    // A value of exactly 1 is clamped to 1 - 2^-53 rather than producing inf.
    std::vector<double> saturated{1.0};
    CHECK(std::isfinite(aar_sum(saturated)));
    CHECK(aar_sum(saturated) == doctest::Approx(53 * std::log(2.0)).epsilon(1e-9));
    CHECK_THROWS_AS(aar_sum(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(aar_sum(std::vector<double>{1.5}), std::invalid_argument);
}

TEST_CASE("regularized_gamma_cdf against fixed points and quadrature oracle") {
    CHECK(regularized_gamma_cdf(1.0, 1.0) ==
          doctest::Approx(0.6321205588285577).epsilon(1e-12));
    CHECK(regularized_gamma_cdf(5.0, 0.0) == 0.0);
    // Frozen from the quadrature oracle (also the mpmath value).
    CHECK(regularized_gamma_cdf(50.0, 50.0) ==
          doctest::Approx(0.5188083154720433).epsilon(1e-12));
    CHECK(oracles::gamma_cdf_quadrature(50.0, 50.0) ==
          doctest::Approx(0.5188083154720433).epsilon(1e-9));
    CHECK_THROWS_AS(regularized_gamma_cdf(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(regularized_gamma_cdf(1.0, std::nan("")), std::invalid_argument);
}

TEST_CASE("gamma cdf: monotonicity and series/continued-fraction complement") {
    for (double s : {0.5, 1.0, 3.0, 17.0, 120.0, 900.0}) {
        double prev = -1.0;
        for (double frac : {0.2, 0.6, 0.9, 1.0, 1.1, 1.5, 2.5}) {
            double x = s * frac;
            double p = regularized_gamma_cdf(s, x);
            CHECK(p >= prev);
            prev = p;
            CHECK(p + regularized_gamma_q(s, x) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("aar_p_value fixed points") {
    CHECK(aar_p_value(0.0, 7) == doctest::Approx(1.0));
    CHECK(aar_p_value(1.0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(aar_p_value(50.0, 50) == doctest::Approx(0.4811916845279567).epsilon(1e-10));
}

TEST_CASE("aar p-values are Uniform[0,1] under the null") {
    // 1e5 independent windows of length 100.
    const std::size_t n_windows = 100000, w = 100;
    SchemeParams params;
    params.scheme = Scheme::kAar;
    CounterRng rng(20260811);
    std::vector<double> pvals(n_windows);
    std::vector<double> window(w);
    for (std::size_t i = 0; i < n_windows; ++i) {
        for (auto& u : window) u = rng.next_unit();
        pvals[i] = aar_p_value(aar_sum(window), w);
    }
    double d = oracles::ks_distance_uniform(pvals);
    // Kolmogorov critical value at alpha 0.01.
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(n_windows)));
}

TEST_CASE("binomial_tail against big-integer enumeration") {
    CHECK(binomial_tail(50, 0.5, 0) == doctest::Approx(1.0));
    double t42 = binomial_tail(50, 0.5, 42);
    double t41 = binomial_tail(50, 0.5, 41);
    CHECK(t42 == doctest::Approx(static_cast<double>(oracles::binomial_tail_half_exact(50, 42)))
                     .epsilon(1e-12));
    CHECK(t41 == doctest::Approx(static_cast<double>(oracles::binomial_tail_half_exact(50, 41)))
                     .epsilon(1e-12));
    // These bracket alpha = 1e-6 (Appendix-style threshold anchor).
    CHECK(t42 < 1e-6);
    CHECK(t41 >= 1e-6);
    CHECK(t42 == doctest::Approx(5.81777902297631e-7).epsilon(1e-10));
}

TEST_CASE("binomial_tail matches enumeration for every w <= 60 and k") {
    for (unsigned w = 1; w <= 60; ++w) {
        for (unsigned k = 0; k <= w; ++k) {
            double exact = static_cast<double>(oracles::binomial_tail_half_exact(w, k));
            CHECK(binomial_tail(w, 0.5, k) == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("binomial_tail for asymmetric gamma against log-space oracle") {
    for (double gamma : {0.25, 0.5, 0.75}) {
        for (unsigned w : {10u, 61u, 127u, 400u}) {
            for (unsigned k : {0u, 1u, w / 4u, w / 2u, 3u * w / 4u, w}) {
                double mine = binomial_tail(w, gamma, k);
                double ref = static_cast<double>(oracles::binomial_tail_logsum(w, gamma, k));
                CHECK(mine == doctest::Approx(ref).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("inverse_normal_cdf") {
    CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(inverse_normal_cdf(1.0 - 1e-6) == doctest::Approx(4.753424308822899).epsilon(1e-9));
    CHECK(inverse_normal_cdf(1e-6) == doctest::Approx(-4.753424308822899).epsilon(1e-9));
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
    CHECK_THROWS_AS(inverse_normal_cdf(0.0), std::invalid_argument);
}

TEST_CASE("kgw_threshold: CLT constant, exact small-window value, undecidable") {
    auto clt = kgw_threshold(10000, 0.5, 1e-6, 200);
    REQUIRE(clt.has_value());
    CHECK(*clt == doctest::Approx(4.7534).epsilon(1e-3));
    auto exact50 = kgw_threshold(50, 0.5, 1e-6, 200);
    REQUIRE(exact50.has_value());
    CHECK(*exact50 == doctest::Approx(4.808326112068523).epsilon(1e-12));
    CHECK_FALSE(kgw_threshold(5, 0.5, 1e-6, 200).has_value());  // 2^-5 > 1e-6
}

TEST_CASE("aar_threshold is the identity plus a null rejection-rate check") {
    CHECK(aar_threshold(1e-6) == 1e-6);
    CHECK(aar_threshold(0.05) == 0.05);
    // 1e6 independent windows of W=100 at p* = 1e-3: rejection rate within
    // 1e-3 +- 3e-4 (spec tolerance; ~10 sigma at this sample size).
    const std::size_t n_windows = 1000000, w = 100;
    CounterRng rng(77);
    std::size_t rejected = 0;
    std::vector<double> window(w);
    double sum;
    for (std::size_t i = 0; i < n_windows; ++i) {
        sum = 0.0;
        for (std::size_t j = 0; j < w; ++j) sum += -std::log1p(-rng.next_unit());
        rejected += aar_p_value(sum, w) < aar_threshold(1e-3);
    }
    double rate = static_cast<double>(rejected) / static_cast<double>(n_windows);
    CHECK(rate > 1e-3 - 3e-4);
    CHECK(rate < 1e-3 + 3e-4);
}

TEST_CASE("window_statistic fixed cases") {
    ScoreStream all_green{Scheme::kKgw, std::vector<double>(100, 1.0)};
    auto stat = window_statistic(all_green, {0, 100}, 0.5);
    CHECK(stat.raw == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(stat.tail_prob == doctest::Approx(7.888609052210118e-31).epsilon(1e-10));
    CHECK(stat.log_tail_prob == doctest::Approx(-100.0 * std::log(2.0)).epsilon(1e-10));

    ScoreStream half{Scheme::kKgw, {}};
    for (int i = 0; i < 100; ++i) half.values.push_back(i % 2 == 0 ? 1.0 : 0.0);
    auto stat2 = window_statistic(half, {0, 100}, 0.5);
    CHECK(stat2.raw == doctest::Approx(0.0));
    CHECK(stat2.tail_prob > 0.4);

    ScoreStream aar{Scheme::kAar, std::vector<double>(50, 1.0 - std::exp(-1.0))};
    auto stat3 = window_statistic(aar, {0, 50}, 0.5);
    CHECK(stat3.raw == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(stat3.tail_prob == doctest::Approx(0.4811916845279567).epsilon(1e-9));

    CHECK_THROWS_AS(window_statistic(half, {10, 10}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(window_statistic(half, {90, 101}, 0.5), std::invalid_argument);
}

TEST_CASE("window_statistic tail is monotone in the raw statistic at fixed W") {
    for (std::int64_t k = 1; k <= 60; ++k)
        CHECK(log_binomial_tail(60, 0.5, k) < log_binomial_tail(60, 0.5, k - 1));
    double prev = 0.0;
    for (double s : {1.0, 5.0, 25.0, 60.0, 90.0}) {
        double lt = log_regularized_gamma_q(60.0, s);
        CHECK(lt < prev);
        prev = lt;
    }
}

TEST_CASE("threshold minimality for every window length up to 400") {
    const double alpha = 1e-6;
    auto table = ThresholdTable::build(Scheme::kKgw, 0.5, alpha);
    for (std::size_t w = 1; w <= 400; ++w) {
        auto k = kgw_min_green_count(w, 0.5, alpha);
        if (!k) {
            CHECK(binomial_tail(w, 0.5, w) >= alpha);
            continue;
        }
        CHECK(binomial_tail(w, 0.5, *k) < alpha);
        CHECK(binomial_tail(w, 0.5, *k - 1) >= alpha);
        if (w < table.clt_cutoff()) {
            auto thr = table.raw_threshold(w);
            REQUIRE(thr.has_value());
            CHECK(*thr == doctest::Approx(kgw_z(*k, w, 0.5)).epsilon(1e-12));
        }
    }
}

TEST_CASE("threshold table: decision rules, serialization round trip") {
    auto table = ThresholdTable::build(Scheme::kKgw, 0.5, 1e-6);
    CHECK(table.min_decidable_window() == 20);  // 2^-19 > 1e-6 > 2^-20
    CHECK(table.passes_kgw(50, 42));
    CHECK_FALSE(table.passes_kgw(50, 41));
    CHECK(table.passes_kgw(10000, 5340));   // z ~ 6.8
    CHECK_FALSE(table.passes_kgw(10000, 5200));  // z = 4.0
    CHECK_FALSE(table.passes_kgw(5, 5));

    auto json1 = table.to_json();
    auto reloaded = ThresholdTable::from_json(json1);
    CHECK(reloaded.to_json() == json1);
    auto json2 = ThresholdTable::build(Scheme::kKgw, 0.5, 1e-6).to_json();
    CHECK(json1 == json2);  // byte-identical for identical parameters

    auto aar_table = ThresholdTable::build(Scheme::kAar, 0.5, 1e-6);
    CHECK(aar_table.passes_aar(std::log(0.9e-6)));
    CHECK_FALSE(aar_table.passes_aar(std::log(1.1e-6)));
    auto s_star = aar_table.raw_threshold(100);
    REQUIRE(s_star.has_value());
    // The exported raw threshold sits exactly at the alpha contour.
    CHECK(aar_p_value(*s_star, 100) == doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("expected z over centered windows peaks at the segment length") {
    // Single segment of length 200 at gamma=0.5, gamma1=0.75; light version
    // of the shape check (the acceptance suite runs the full protocol).
    const std::size_t L = 200, offset = 900, n = 2000;
    SchemeParams params;
    params.gamma1 = 0.75;
    const int trials = 500;
    std::vector<std::size_t> ws{50, 100, 200, 400, 800};
    std::vector<double> mean_z(ws.size(), 0.0);
    for (int t = 0; t < trials; ++t) {
        auto stream = sample_null_stream(params, n, derive_seed(1000, t));
        stream = embed_segments(stream, {{SegmentSpan{offset, offset + L}, params}},
                                derive_seed(2000, t));
        for (std::size_t i = 0; i < ws.size(); ++i) {
            std::size_t w = ws[i];
            std::size_t center = offset + L / 2;
            std::size_t start = center - w / 2;
            mean_z[i] += window_statistic(stream, {start, start + w}, 0.5).raw;
        }
    }
    for (auto& z : mean_z) z /= trials;
    for (std::size_t i = 0; i < ws.size(); ++i)
        if (ws[i] != 200) CHECK(mean_z[2] > mean_z[i]);
    // W < L: E[z] = sqrt(W)(g1-g)/sqrt(g(1-g)); W > L: E[z] = L(g1-g)/sqrt(g(1-g)W)
    CHECK(mean_z[0] == doctest::Approx(0.5 * std::sqrt(50.0)).epsilon(0.05));
    CHECK(mean_z[4] == doctest::Approx(100.0 / std::sqrt(800.0)).epsilon(0.05));
}
