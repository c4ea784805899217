// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "waterseeker/statistics.hpp"
#include "waterseeker/types.hpp"

namespace waterseeker {

// Output contract shared by all detectors: has_watermark iff indices is
// non-empty; indices sorted by start and pairwise disjoint;
// per_segment_stats aligned with indices.
//
// windows_evaluated counts sliding-window positions scanned (WinMax: every
// (w, i) pair on its grid; FLSW and WaterSeeker stage 1: N-W+1; full-text: 1).
// candidate_windows_evaluated counts local-traversal start/end candidates
// (WaterSeeker stage 2 only). Their sum is bounded by
// spans * W^2 + (N - W + 1) for WaterSeeker.
struct DetectionResult {
    bool has_watermark = false;
    std::vector<SegmentSpan> indices;
    std::vector<WindowStatistic> per_segment_stats;
    std::uint64_t windows_evaluated = 0;
    std::uint64_t candidate_windows_evaluated = 0;
};

struct WaterSeekerConfig {
    std::size_t window = 50;             // smoothing window W
    std::size_t top_k = 20;              // k of the top-k mean in the anomaly threshold
    std::size_t connect_tolerance = 100; // max gap between connected anomalous indices
    std::size_t min_segment_len = 100;   // localized spans shorter than this are dropped
    double alpha = 1e-6;
    double gamma = 0.5;
    std::size_t kgw_clt_cutoff = ThresholdTable::kDefaultCltCutoff;

    void validate() const {
        if (window < 2) throw std::invalid_argument("window must be >= 2");
        if (top_k < 1) throw std::invalid_argument("top_k must be >= 1");
        if (min_segment_len < 1) throw std::invalid_argument("min_segment_len must be >= 1");
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    }
};

// Computes the statistic over the whole stream and compares against the
// length-N threshold.
DetectionResult full_text_detect(const ScoreStream& stream, const SchemeParams& params);

// Scans every window size in {1, 1+interval, 1+2*interval, ...} and every
// offset; keeps the window with the best cross-window score (KGW: the raw
// z-score; Aar: the p-value; ties: smaller size, then smaller start) and
// flags the document iff that window passes its length-specific threshold.
// Undecidable window sizes are skipped. At most one span is returned.
DetectionResult winmax_detect(const ScoreStream& stream, const SchemeParams& params,
                              std::size_t interval);

// Fixed-length sliding window with stride 1; every passing window is
// recorded and overlapping or abutting windows are merged into maximal spans.
DetectionResult flsw_detect(const ScoreStream& stream, const SchemeParams& params,
                            std::size_t window);

// Stage 1: smoothed score list, Eq.-style anomaly threshold from the list
// mean and top-k mean, fragment connection, minimum-length filter.
std::vector<SegmentSpan> waterseeker_localize(const ScoreStream& stream,
                                              const WaterSeekerConfig& cfg);

// Stage 1 + stage 2: for every localized span, traverses all start/end
// candidates within one window of its boundaries, keeps the most significant
// candidate (ties: longer span, then smaller start) and accepts it iff it
// passes its length-specific threshold.
DetectionResult waterseeker_detect(const ScoreStream& stream, const WaterSeekerConfig& cfg,
                                   const SchemeParams& params);

// Ablation variant: accepts or rejects each localized span on its own
// statistic, with no boundary traversal.
DetectionResult waterseeker_detect_without_traversal(const ScoreStream& stream,
                                                     const WaterSeekerConfig& cfg,
                                                     const SchemeParams& params);

}  // namespace waterseeker
