// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace waterseeker {

enum class Scheme { kKgw, kAar };

inline const char* scheme_name(Scheme s) {
    return s == Scheme::kKgw ? "kgw" : "aar";
}

inline Scheme scheme_from_name(const std::string& name) {
    if (name == "kgw") return Scheme::kKgw;
    if (name == "aar") return Scheme::kAar;
    throw std::invalid_argument("unknown scheme: " + name);
}

// Half-open token interval [start, end).
struct SegmentSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - start; }

    bool operator==(const SegmentSpan&) const = default;
};

inline void validate_span(const SegmentSpan& s, std::size_t doc_len) {
    if (s.start >= s.end || s.end > doc_len) {
        throw std::invalid_argument("invalid span [" + std::to_string(s.start) + ", " +
                                    std::to_string(s.end) + ") for document of length " +
                                    std::to_string(doc_len));
    }
}

// Per-token watermark evidence for one document.
// KGW: values are red/green bits in {0,1}. Aar: values are u_t(y_t) in [0,1].
struct ScoreStream {
    Scheme scheme = Scheme::kKgw;
    std::vector<double> values;

    std::size_t length() const { return values.size(); }

    void validate() const {
        for (double v : values) {
            if (scheme == Scheme::kKgw) {
                if (v != 0.0 && v != 1.0)
                    throw std::invalid_argument("kgw stream value must be 0 or 1");
            } else {
                if (!(v >= 0.0 && v <= 1.0))
                    throw std::invalid_argument("aar stream value must lie in [0,1]");
            }
        }
    }

    bool operator==(const ScoreStream&) const = default;
};

// Statistical parameters of a watermark scheme plus the per-window
// false-positive target alpha.
struct SchemeParams {
    Scheme scheme = Scheme::kKgw;
    double gamma = 0.5;         // green fraction of the vocabulary (KGW)
    double gamma1 = 0.75;       // green rate inside watermarked text (KGW)
    double aar_strength = 0.0;  // mean-shift parameter of the watermarked u distribution (Aar)
    double alpha = 1e-6;        // target in-window false-positive rate

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("alpha must lie in (0,1)");
        if (scheme == Scheme::kKgw) {
            if (!(gamma > 0.0 && gamma < 1.0))
                throw std::invalid_argument("gamma must lie in (0,1)");
            if (!(gamma1 > gamma && gamma1 <= 1.0))
                throw std::invalid_argument("gamma1 must lie in (gamma, 1]");
        } else {
            if (!(aar_strength >= 0.0))
                throw std::invalid_argument("aar_strength must be >= 0");
        }
    }

    bool operator==(const SchemeParams&) const = default;
};

// Key for the deterministic token scorer.
struct TokenScorerKey {
    std::uint64_t secret_key = 0;
    std::uint32_t vocab_size = 2;

    void validate() const {
        if (vocab_size < 2) throw std::invalid_argument("vocab_size must be >= 2");
    }
};

}  // namespace waterseeker
