// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0

#include "waterseeker/evaluation.hpp"

#include <algorithm>

namespace waterseeker {
namespace {

// Union of possibly overlapping spans as a sorted disjoint list.
std::vector<SegmentSpan> normalize(std::vector<SegmentSpan> spans) {
    std::sort(spans.begin(), spans.end(), [](const SegmentSpan& a, const SegmentSpan& b) {
        return a.start < b.start || (a.start == b.start && a.end < b.end);
    });
    std::vector<SegmentSpan> out;
    for (const auto& s : spans) {
        if (!out.empty() && s.start <= out.back().end)
            out.back().end = std::max(out.back().end, s.end);
        else
            out.push_back(s);
    }
    return out;
}

std::size_t total_length(const std::vector<SegmentSpan>& spans) {
    std::size_t n = 0;
    for (const auto& s : spans) n += s.length();
    return n;
}

std::size_t intersection_length(const std::vector<SegmentSpan>& a,
                                const std::vector<SegmentSpan>& b) {
    std::size_t total = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        std::size_t lo = std::max(a[i].start, b[j].start);
        std::size_t hi = std::min(a[i].end, b[j].end);
        if (lo < hi) total += hi - lo;
        if (a[i].end < b[j].end)
            ++i;
        else
            ++j;
    }
    return total;
}

}  // namespace

double iou(const std::vector<SegmentSpan>& detected, const std::vector<SegmentSpan>& gold) {
    auto d = normalize(detected);
    auto g = normalize(gold);
    std::size_t inter = intersection_length(d, g);
    std::size_t uni = total_length(d) + total_length(g) - inter;
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

bool is_success(const DetectionResult& result, const std::vector<SegmentSpan>& gold) {
    if (gold.empty())
        throw std::invalid_argument("is_success requires a positive document (non-empty gold)");
    return result.has_watermark && iou(result.indices, gold) > 0.0;
}

EvalOutcome evaluate_corpus(const std::vector<DetectionResult>& results,
                            const std::vector<std::vector<SegmentSpan>>& labels) {
    if (results.size() != labels.size())
        throw std::invalid_argument("results and labels differ in length");
    EvalOutcome out;
    double iou_sum = 0.0;
    std::uint64_t positives = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (labels[i].empty()) {
            if (results[i].has_watermark)
                ++out.false_positive;
            else
                ++out.true_negative;
            continue;
        }
        ++positives;
        iou_sum += iou(results[i].indices, labels[i]);
        if (is_success(results[i], labels[i]))
            ++out.true_positive;
        else
            ++out.false_negative;
    }
    double tp = static_cast<double>(out.true_positive);
    double fp = static_cast<double>(out.false_positive);
    double fn = static_cast<double>(out.false_negative);
    double tn = static_cast<double>(out.true_negative);
    out.f1 = (2.0 * tp + fp + fn) > 0.0 ? 2.0 * tp / (2.0 * tp + fp + fn) : 0.0;
    out.fpr = (fp + tn) > 0.0 ? fp / (fp + tn) : 0.0;
    out.fnr = (fn + tp) > 0.0 ? fn / (fn + tp) : 0.0;
    out.mean_iou = positives > 0 ? iou_sum / static_cast<double>(positives) : 0.0;
    return out;
}

LocalizationStats localization_stats(const std::vector<SegmentSpan>& localized,
                                     const SegmentSpan& gold) {
    LocalizationStats stats;
    const SegmentSpan* best = nullptr;
    std::size_t best_overlap = 0;
    for (const auto& s : localized) {
        std::size_t lo = std::max(s.start, gold.start);
        std::size_t hi = std::min(s.end, gold.end);
        std::size_t overlap = lo < hi ? hi - lo : 0;
        if (overlap > best_overlap) {
            best_overlap = overlap;
            best = &s;
        }
    }
    stats.coverage = static_cast<double>(best_overlap) / static_cast<double>(gold.length());
    if (best != nullptr) {
        stats.start_offset = best->start > gold.start ? best->start - gold.start
                                                      : gold.start - best->start;
        stats.end_offset = best->end > gold.end ? best->end - gold.end : gold.end - best->end;
    }
    return stats;
}

}  // namespace waterseeker
