// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0

#include "waterseeker/stream_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "waterseeker/rng.hpp"

namespace waterseeker {
namespace {

constexpr std::uint64_t kSentinelContext = 0xFFFFFFFFFFFFFFFFULL;

double draw_watermarked_value(const SchemeParams& params, CounterRng& rng) {
    if (params.scheme == Scheme::kKgw) return rng.next_bernoulli(params.gamma1) ? 1.0 : 0.0;
    double u = rng.next_unit();
    if (params.aar_strength == 0.0) return u;  // Beta(1,1) is the null itself
    // Inverse transform for Beta(1+s, 1): CDF x^(1+s) on [0,1].
    return std::pow(u, 1.0 / (1.0 + params.aar_strength));
}

double draw_null_value(const SchemeParams& params, CounterRng& rng) {
    if (params.scheme == Scheme::kKgw) return rng.next_bernoulli(params.gamma) ? 1.0 : 0.0;
    return rng.next_unit();
}

std::uint64_t scorer_hash(std::uint64_t secret_key, std::uint64_t context, std::uint64_t extra) {
    std::uint64_t h = secret_key;
    h = detail::mix64(h ^ detail::mix64(context + 0x243F6A8885A308D3ULL));
    h = detail::mix64(h ^ detail::mix64(extra + 0x13198A2E03707344ULL));
    return h;
}

// Keyed permutation of [0, vocab_size) built from a 4-round Feistel network
// over an even power-of-two domain with cycle walking back into range.
class VocabPermutation {
public:
    VocabPermutation(std::uint64_t secret_key, std::uint64_t context, std::uint32_t vocab_size)
        : vocab_size_(vocab_size) {
        half_bits_ = 1;
        while ((1ULL << (2 * half_bits_)) < vocab_size) ++half_bits_;
        half_mask_ = (1ULL << half_bits_) - 1;
        for (int r = 0; r < 4; ++r)
            round_key_[r] = scorer_hash(secret_key, context, 0x9000 + static_cast<std::uint64_t>(r));
    }

    std::uint32_t apply(std::uint32_t token) const {
        std::uint64_t x = token;
        do {
            x = encrypt(x);
        } while (x >= vocab_size_);  // cycle walk
        return static_cast<std::uint32_t>(x);
    }

private:
    std::uint64_t encrypt(std::uint64_t x) const {
        std::uint64_t left = x >> half_bits_;
        std::uint64_t right = x & half_mask_;
        for (int r = 0; r < 4; ++r) {
            std::uint64_t f = detail::mix64(round_key_[r] ^ right) & half_mask_;
            std::uint64_t next = left ^ f;
            left = right;
            right = next;
        }
        return (left << half_bits_) | right;
    }

    std::uint32_t vocab_size_;
    unsigned half_bits_;
    std::uint64_t half_mask_;
    std::uint64_t round_key_[4];
};

}  // namespace

ScoreStream sample_null_stream(const SchemeParams& params, std::size_t n,
                               std::uint64_t rng_seed) {
    params.validate();
    if (n == 0) throw std::invalid_argument("stream length must be >= 1");
    CounterRng rng(rng_seed);
    ScoreStream out;
    out.scheme = params.scheme;
    out.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.values.push_back(draw_null_value(params, rng));
    return out;
}

std::vector<double> sample_watermarked_values(const SchemeParams& params, std::size_t n,
                                              std::uint64_t rng_seed) {
    params.validate();
    if (n == 0) throw std::invalid_argument("sample count must be >= 1");
    CounterRng rng(rng_seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(draw_watermarked_value(params, rng));
    return out;
}

ScoreStream embed_segments(const ScoreStream& null_stream,
                           const std::vector<std::pair<SegmentSpan, SchemeParams>>& segments,
                           std::uint64_t rng_seed) {
    const std::size_t n = null_stream.length();
    std::vector<SegmentSpan> sorted;
    sorted.reserve(segments.size());
    for (const auto& [span, params] : segments) {
        validate_span(span, n);
        if (params.scheme != null_stream.scheme)
            throw std::invalid_argument("segment scheme differs from the stream scheme");
        params.validate();
        sorted.push_back(span);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const SegmentSpan& a, const SegmentSpan& b) { return a.start < b.start; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].start < sorted[i - 1].end)
            throw std::invalid_argument("segments overlap");

    ScoreStream out = null_stream;
    std::size_t idx = 0;
    for (const auto& [span, params] : segments) {
        auto vals = sample_watermarked_values(params, span.length(), derive_seed(rng_seed, idx));
        std::copy(vals.begin(), vals.end(), out.values.begin() + static_cast<std::ptrdiff_t>(span.start));
        ++idx;
    }
    return out;
}

ScoreStream score_tokens(std::span<const std::uint32_t> tokens, const TokenScorerKey& key,
                         Scheme scheme, double gamma) {
    key.validate();
    if (tokens.empty()) throw std::invalid_argument("token list must be non-empty");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");
    for (std::uint32_t t : tokens)
        if (t >= key.vocab_size) throw std::invalid_argument("token id out of vocabulary range");

    ScoreStream out;
    out.scheme = scheme;
    out.values.reserve(tokens.size());
    const auto green_slots =
        static_cast<std::uint32_t>(std::floor(gamma * static_cast<double>(key.vocab_size)));
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        std::uint64_t context = t == 0 ? kSentinelContext : tokens[t - 1];
        if (scheme == Scheme::kKgw) {
            VocabPermutation perm(key.secret_key, context, key.vocab_size);
            out.values.push_back(perm.apply(tokens[t]) < green_slots ? 1.0 : 0.0);
        } else {
            std::uint64_t h = scorer_hash(key.secret_key, context, tokens[t]);
            out.values.push_back(static_cast<double>(h >> 11) * 0x1.0p-53);
        }
    }
    return out;
}

EditAttackResult apply_edit_attack(const ScoreStream& stream,
                                   const std::vector<SegmentSpan>& gold, EditAttackKind kind,
                                   double ratio, std::uint64_t rng_seed) {
    if (!(ratio >= 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must lie in [0,1)");
    for (const auto& g : gold) validate_span(g, stream.length());
    if (ratio == 0.0) return {stream, gold};

    const std::size_t n = stream.length();
    SchemeParams null_params;
    null_params.scheme = stream.scheme;
    CounterRng select_rng(derive_seed(rng_seed, 0));
    CounterRng redraw_rng(derive_seed(rng_seed, 1));

    std::vector<char> selected(n);
    for (std::size_t i = 0; i < n; ++i) selected[i] = select_rng.next_bernoulli(ratio);

    EditAttackResult out;
    out.stream.scheme = stream.scheme;
    if (kind == EditAttackKind::kSubstitute) {
        out.stream.values = stream.values;
        for (std::size_t i = 0; i < n; ++i) {
            bool affected = selected[i] || (i > 0 && selected[i - 1]);
            if (affected) out.stream.values[i] = draw_null_value(null_params, redraw_rng);
        }
        out.gold = gold;
        return out;
    }

    // DELETE: keep unselected positions; a survivor whose predecessor was
    // deleted loses its hash context and is re-drawn from null.
    std::vector<std::size_t> rank(n + 1, 0);  // survivors strictly before i
    out.stream.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        rank[i + 1] = rank[i] + (selected[i] ? 0 : 1);
        if (selected[i]) continue;
        double v = stream.values[i];
        if (i > 0 && selected[i - 1]) v = draw_null_value(null_params, redraw_rng);
        out.stream.values.push_back(v);
    }
    for (const auto& g : gold) {
        SegmentSpan mapped{rank[g.start], rank[g.end]};
        if (mapped.start < mapped.end) out.gold.push_back(mapped);
    }
    return out;
}

}  // namespace waterseeker
