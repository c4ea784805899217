// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "waterseeker/detectors.hpp"
#include "waterseeker/types.hpp"

namespace waterseeker {

struct EvalOutcome {
    std::uint64_t true_positive = 0;
    std::uint64_t false_positive = 0;
    std::uint64_t false_negative = 0;
    std::uint64_t true_negative = 0;
    double f1 = 0.0;
    double fpr = 0.0;
    double fnr = 0.0;
    double mean_iou = 0.0;  // over positive documents
};

// Token-level intersection-over-union between the unions of the two span
// lists. 0 when either union is empty.
double iou(const std::vector<SegmentSpan>& detected, const std::vector<SegmentSpan>& gold);

// A positive document counts as detected iff the detector raised the flag and
// the detected spans overlap the gold spans at all.
bool is_success(const DetectionResult& result, const std::vector<SegmentSpan>& gold);

// Aggregates confusion counts and metrics over a corpus. labels[i] empty
// means document i is negative.
EvalOutcome evaluate_corpus(const std::vector<DetectionResult>& results,
                            const std::vector<std::vector<SegmentSpan>>& labels);

struct LocalizationStats {
    double coverage = 0.0;  // |intersection| / |gold|
    // Offsets of the max-overlap localized span; absent when nothing overlapped.
    std::optional<std::size_t> start_offset;
    std::optional<std::size_t> end_offset;
};

// Coverage and boundary offsets of the localization result against a single
// gold segment.
LocalizationStats localization_stats(const std::vector<SegmentSpan>& localized,
                                     const SegmentSpan& gold);

}  // namespace waterseeker
