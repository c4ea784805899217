// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "waterseeker/stream_model.hpp"
#include "waterseeker/types.hpp"

namespace waterseeker {

// Parse or schema failures when reading corpus files.
class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AttackDescriptor {
    EditAttackKind kind = EditAttackKind::kSubstitute;
    double ratio = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const AttackDescriptor&) const = default;
};

struct RecordMeta {
    SchemeParams params;
    std::optional<std::string> strength;  // "strong" | "medium" | "weak"
    std::uint64_t seed = 0;               // regenerates the record bit-identically
    std::optional<AttackDescriptor> attack;

    bool operator==(const RecordMeta&) const = default;
};

struct CorpusRecord {
    std::string doc_id;
    ScoreStream stream;
    std::vector<SegmentSpan> gold;
    RecordMeta meta;

    bool operator==(const CorpusRecord&) const = default;
};

struct StrengthPreset {
    std::string label;
    SchemeParams params;
};

// strong/medium/weak presets: KGW gamma1 in {0.90, 0.75, 0.65}, Aar strength
// in {3, 2, 1}. Artifact-defined proxies, recorded in record metadata.
std::vector<StrengthPreset> default_strength_pool(Scheme scheme, double gamma = 0.5,
                                                  double alpha = 1e-6);

struct CorpusSpec {
    Scheme scheme = Scheme::kKgw;
    std::size_t n_positive = 300;
    std::size_t n_negative = 300;
    std::size_t doc_len = 10000;
    std::size_t seg_len_min = 100;
    std::size_t seg_len_max = 400;
    std::size_t segments_per_doc = 1;
    std::size_t min_gap = 100;  // 2 * default smoothing window
    std::vector<StrengthPreset> strength_pool;
    std::uint64_t master_seed = 1;

    void validate() const;
};

// Builds positives (null stream + embedded segments, lengths uniform in
// range, placement uniform over feasible offsets with the minimum gap) and
// negatives (pure null streams). Fully determined by master_seed.
std::vector<CorpusRecord> build_corpus(const CorpusSpec& spec);

// Regenerates a single record from its per-record seed.
CorpusRecord build_record(const CorpusSpec& spec, std::size_t index);

// Applies the edit attack to every record; gold spans are remapped for
// DELETE and the attack descriptor is recorded in the metadata.
std::vector<CorpusRecord> attack_corpus(const std::vector<CorpusRecord>& records,
                                        EditAttackKind kind, double ratio, std::uint64_t seed);

// JSONL schema v1, one record per line. save/load round-trips exactly,
// including float values.
void save_corpus(const std::vector<CorpusRecord>& records, const std::string& path);
std::vector<CorpusRecord> load_corpus(const std::string& path);

std::string record_to_json_line(const CorpusRecord& record);
CorpusRecord record_from_json_line(const std::string& line, std::size_t line_number);

}  // namespace waterseeker
