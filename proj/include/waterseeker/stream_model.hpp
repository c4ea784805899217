// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "waterseeker/types.hpp"

namespace waterseeker {

// Draws a watermark-free stream: KGW tokens are independent Bernoulli(gamma)
// green bits, Aar tokens are independent Uniform[0,1) draws.
ScoreStream sample_null_stream(const SchemeParams& params, std::size_t n, std::uint64_t rng_seed);

// Draws in-segment scores: KGW Bernoulli(gamma1); Aar Beta(1 + aar_strength, 1),
// which is the null distribution at strength 0 and stochastically dominates it
// otherwise.
std::vector<double> sample_watermarked_values(const SchemeParams& params, std::size_t n,
                                              std::uint64_t rng_seed);

// Replaces the values inside each span with watermarked draws; everything
// outside the spans is untouched. Spans must be pairwise disjoint, in bounds,
// and share the stream's scheme.
ScoreStream embed_segments(const ScoreStream& null_stream,
                           const std::vector<std::pair<SegmentSpan, SchemeParams>>& segments,
                           std::uint64_t rng_seed);

// Scores a token sequence with a keyed hash of the immediately preceding
// token (position 0 uses a fixed sentinel context). KGW: token t is green iff
// a keyed permutation of the vocabulary places it in the first
// floor(gamma * vocab_size) slots. Aar: u_t(y_t) is a keyed uniform draw
// indexed by (token_{t-1}, token_t).
ScoreStream score_tokens(std::span<const std::uint32_t> tokens, const TokenScorerKey& key,
                         Scheme scheme, double gamma = 0.5);

enum class EditAttackKind { kDelete, kSubstitute };

inline const char* edit_attack_name(EditAttackKind k) {
    return k == EditAttackKind::kDelete ? "delete" : "substitute";
}

struct EditAttackResult {
    ScoreStream stream;
    std::vector<SegmentSpan> gold;
};

// Score-level edit attacks. Each position is independently selected with
// probability `ratio`. SUBSTITUTE re-draws the selected position and its
// immediate successor from the null distribution (the hash context of the
// successor is destroyed); length and gold spans are unchanged. DELETE removes
// the selected positions, re-draws the surviving successor of every deletion
// from null, and remaps gold spans onto surviving indices.
EditAttackResult apply_edit_attack(const ScoreStream& stream,
                                   const std::vector<SegmentSpan>& gold, EditAttackKind kind,
                                   double ratio, std::uint64_t rng_seed);

}  // namespace waterseeker
