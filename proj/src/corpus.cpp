// Copyright 2026 The waterseeker Authors
// SPDX-License-Identifier: Apache-2.0

#include "waterseeker/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "waterseeker/rng.hpp"

namespace waterseeker {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

std::string format_doc_id(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "doc-%06zu", index);
    return buf;
}

EditAttackKind attack_kind_from_name(const std::string& name) {
    if (name == "delete") return EditAttackKind::kDelete;
    if (name == "substitute") return EditAttackKind::kSubstitute;
    throw CorpusError("unknown attack kind: " + name);
}

}  // namespace

std::vector<StrengthPreset> default_strength_pool(Scheme scheme, double gamma, double alpha) {
    std::vector<StrengthPreset> pool;
    if (scheme == Scheme::kKgw) {
        for (auto [label, g1] :
             {std::pair{"strong", 0.90}, std::pair{"medium", 0.75}, std::pair{"weak", 0.65}}) {
            SchemeParams p;
            p.scheme = scheme;
            p.gamma = gamma;
            p.gamma1 = g1;
            p.alpha = alpha;
            pool.push_back({label, p});
        }
    } else {
        for (auto [label, s] :
             {std::pair{"strong", 3.0}, std::pair{"medium", 2.0}, std::pair{"weak", 1.0}}) {
            SchemeParams p;
            p.scheme = scheme;
            p.gamma = gamma;
            p.aar_strength = s;
            p.alpha = alpha;
            pool.push_back({label, p});
        }
    }
    return pool;
}

void CorpusSpec::validate() const {
    if (doc_len == 0) throw std::invalid_argument("doc_len must be >= 1");
    if (seg_len_min == 0 || seg_len_min > seg_len_max || seg_len_max > doc_len)
        throw std::invalid_argument("segment length range must satisfy 0 < min <= max <= doc_len");
    if (n_positive > 0) {
        if (segments_per_doc == 0)
            throw std::invalid_argument("segments_per_doc must be >= 1 for positive documents");
        if (strength_pool.empty())
            throw std::invalid_argument("strength_pool must be non-empty for positive documents");
        std::size_t need = segments_per_doc * seg_len_max + (segments_per_doc - 1) * min_gap;
        if (need > doc_len)
            throw std::invalid_argument("segments cannot be packed into doc_len with the gap");
        for (const auto& preset : strength_pool) {
            if (preset.params.scheme != scheme)
                throw std::invalid_argument("strength preset scheme differs from corpus scheme");
            preset.params.validate();
        }
    }
}

CorpusRecord build_record(const CorpusSpec& spec, std::size_t index) {
    spec.validate();
    if (index >= spec.n_positive + spec.n_negative)
        throw std::invalid_argument("record index out of range");
    const bool positive = index < spec.n_positive;
    const std::uint64_t seed = derive_seed(spec.master_seed, index);

    CorpusRecord record;
    record.doc_id = format_doc_id(index);
    record.meta.seed = seed;

    SchemeParams null_params;
    null_params.scheme = spec.scheme;
    if (!spec.strength_pool.empty()) {
        null_params = spec.strength_pool.front().params;  // carries gamma/alpha
    }
    null_params.scheme = spec.scheme;

    if (!positive) {
        record.meta.params = null_params;
        // Strength fields are serialized as null for negatives; keep the
        // in-memory record at the defaults so save/load round-trips exactly.
        record.meta.params.gamma1 = SchemeParams{}.gamma1;
        record.meta.params.aar_strength = SchemeParams{}.aar_strength;
        record.stream = sample_null_stream(null_params, spec.doc_len, derive_seed(seed, 1));
        return record;
    }

    CounterRng rng(seed);
    const auto& preset = spec.strength_pool[rng.next_below(spec.strength_pool.size())];
    record.meta.params = preset.params;
    record.meta.strength = preset.label;

    // Segment lengths, then placement: spread the leftover slack uniformly
    // around segments separated by at least min_gap.
    const std::size_t m = spec.segments_per_doc;
    std::vector<std::size_t> lengths(m);
    std::size_t total_len = 0;
    for (auto& len : lengths) {
        len = spec.seg_len_min + rng.next_below(spec.seg_len_max - spec.seg_len_min + 1);
        total_len += len;
    }
    const std::size_t reserved = total_len + (m - 1) * spec.min_gap;
    if (reserved > spec.doc_len) throw std::invalid_argument("infeasible segment packing");
    const std::size_t free_slack = spec.doc_len - reserved;
    std::vector<std::size_t> slack(m);
    for (auto& s : slack) s = rng.next_below(free_slack + 1);
    std::sort(slack.begin(), slack.end());

    std::size_t cursor = 0;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t start = slack[i] + cursor;
        record.gold.push_back({start, start + lengths[i]});
        cursor += lengths[i] + spec.min_gap;
    }

    auto null_stream = sample_null_stream(null_params, spec.doc_len, derive_seed(seed, 1));
    std::vector<std::pair<SegmentSpan, SchemeParams>> segments;
    segments.reserve(m);
    for (const auto& g : record.gold) segments.emplace_back(g, preset.params);
    record.stream = embed_segments(null_stream, segments, derive_seed(seed, 2));
    return record;
}

std::vector<CorpusRecord> build_corpus(const CorpusSpec& spec) {
    spec.validate();
    std::vector<CorpusRecord> records;
    records.reserve(spec.n_positive + spec.n_negative);
    for (std::size_t i = 0; i < spec.n_positive + spec.n_negative; ++i)
        records.push_back(build_record(spec, i));
    return records;
}

std::vector<CorpusRecord> attack_corpus(const std::vector<CorpusRecord>& records,
                                        EditAttackKind kind, double ratio, std::uint64_t seed) {
    if (!(ratio >= 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must lie in [0,1)");
    std::vector<CorpusRecord> out;
    out.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        std::uint64_t attack_seed = derive_seed(seed, i);
        auto attacked = apply_edit_attack(rec.stream, rec.gold, kind, ratio, attack_seed);
        CorpusRecord next;
        next.doc_id = rec.doc_id;
        next.stream = std::move(attacked.stream);
        next.gold = std::move(attacked.gold);
        next.meta = rec.meta;
        next.meta.attack = AttackDescriptor{kind, ratio, attack_seed};
        out.push_back(std::move(next));
    }
    return out;
}

std::string record_to_json_line(const CorpusRecord& record) {
    ordered_json j;
    j["v"] = kSchemaVersion;
    j["doc_id"] = record.doc_id;
    j["scheme"] = scheme_name(record.stream.scheme);
    j["n"] = record.stream.length();
    if (record.stream.scheme == Scheme::kKgw) {
        auto values = ordered_json::array();
        for (double v : record.stream.values) values.push_back(static_cast<int>(v));
        j["values"] = std::move(values);
    } else {
        j["values"] = record.stream.values;
    }
    auto gold = ordered_json::array();
    for (const auto& g : record.gold) gold.push_back({g.start, g.end});
    j["gold"] = std::move(gold);

    ordered_json meta;
    meta["gamma"] = record.meta.params.gamma;
    if (record.stream.scheme == Scheme::kKgw && !record.gold.empty())
        meta["gamma1"] = record.meta.params.gamma1;
    else
        meta["gamma1"] = nullptr;
    if (record.stream.scheme == Scheme::kAar && !record.gold.empty())
        meta["aar_strength"] = record.meta.params.aar_strength;
    else
        meta["aar_strength"] = nullptr;
    meta["alpha"] = record.meta.params.alpha;
    meta["seed"] = record.meta.seed;
    if (record.meta.strength)
        meta["strength"] = *record.meta.strength;
    else
        meta["strength"] = nullptr;
    if (record.meta.attack) {
        ordered_json attack;
        attack["kind"] = edit_attack_name(record.meta.attack->kind);
        attack["ratio"] = record.meta.attack->ratio;
        attack["seed"] = record.meta.attack->seed;
        meta["attack"] = std::move(attack);
    } else {
        meta["attack"] = nullptr;
    }
    meta["rng"] = kRngAlgorithm;
    j["meta"] = std::move(meta);
    return j.dump();
}

CorpusRecord record_from_json_line(const std::string& line, std::size_t line_number) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw CorpusError("line " + std::to_string(line_number) + ": " + e.what());
    }
    try {
        if (!j.contains("v") || !j["v"].is_number_integer() ||
            j["v"].get<int>() != kSchemaVersion) {
            throw CorpusError("line " + std::to_string(line_number) +
                              ": unsupported schema version");
        }
        CorpusRecord record;
        record.doc_id = j.at("doc_id").get<std::string>();
        record.stream.scheme = scheme_from_name(j.at("scheme").get<std::string>());
        record.stream.values = j.at("values").get<std::vector<double>>();
        if (j.at("n").get<std::size_t>() != record.stream.length())
            throw CorpusError("line " + std::to_string(line_number) +
                              ": n disagrees with the value count");
        record.stream.validate();
        for (const auto& g : j.at("gold")) {
            SegmentSpan span{g.at(0).get<std::size_t>(), g.at(1).get<std::size_t>()};
            validate_span(span, record.stream.length());
            record.gold.push_back(span);
        }
        const auto& meta = j.at("meta");
        record.meta.params.scheme = record.stream.scheme;
        record.meta.params.gamma = meta.at("gamma").get<double>();
        if (meta.contains("gamma1") && !meta["gamma1"].is_null())
            record.meta.params.gamma1 = meta["gamma1"].get<double>();
        if (meta.contains("aar_strength") && !meta["aar_strength"].is_null())
            record.meta.params.aar_strength = meta["aar_strength"].get<double>();
        if (meta.contains("alpha")) record.meta.params.alpha = meta["alpha"].get<double>();
        record.meta.seed = meta.at("seed").get<std::uint64_t>();
        if (meta.contains("strength") && !meta["strength"].is_null())
            record.meta.strength = meta["strength"].get<std::string>();
        if (meta.contains("attack") && !meta["attack"].is_null()) {
            AttackDescriptor attack;
            attack.kind = attack_kind_from_name(meta["attack"].at("kind").get<std::string>());
            attack.ratio = meta["attack"].at("ratio").get<double>();
            attack.seed = meta["attack"].at("seed").get<std::uint64_t>();
            record.meta.attack = attack;
        }
        return record;
    } catch (const CorpusError&) {
        throw;
    } catch (const std::exception& e) {
        throw CorpusError("line " + std::to_string(line_number) + ": " + e.what());
    }
}

void save_corpus(const std::vector<CorpusRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CorpusError("cannot open for writing: " + path);
    for (const auto& rec : records) out << record_to_json_line(rec) << '\n';
    if (!out) throw CorpusError("write failed: " + path);
}

std::vector<CorpusRecord> load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open for reading: " + path);
    std::vector<CorpusRecord> records;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        records.push_back(record_from_json_line(line, line_number));
    }
    return records;
}

}  // namespace waterseeker
