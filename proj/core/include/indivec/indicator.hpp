#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "indivec/labels.hpp"

namespace indivec {

enum class TextLevel : uint8_t { Article, Sentence };

std::string_view to_string(TextLevel level);
TextLevel level_from_string(std::string_view s);

/// A labeled corpus document that indicators are generated from.
struct SourceDocument {
    std::string id;
    std::string text;
    Leaning gold_leaning = Leaning::Center;
    TextLevel level = TextLevel::Article;
    std::string origin;  // dataset name
};

/// An indicator as parsed from generation output, before verification.
/// Text is a single line of at most 512 characters.
struct RawIndicator {
    std::string text;
    BiasCategory category;
    Leaning leaning;
    std::string source_doc;
};

inline constexpr size_t kMaxIndicatorChars = 512;

/// A verified database entry. The id is a stable content hash of
/// (text, category, leaning), so identical statements collide on purpose.
struct Indicator {
    std::string id;
    std::string text;
    BiasCategory category = BiasCategory::ToneAndLanguage;
    Leaning leaning = Leaning::Center;
    int confidence = 10;  // 1..10
    std::string source_doc;
    std::string origin;
};

std::string indicator_content_id(std::string_view text, BiasCategory category, Leaning leaning);

Indicator make_indicator(const RawIndicator& raw, int confidence, std::string_view origin);

/// Bookkeeping for one forge run. The counts always satisfy
/// retained = generated - conflict - low_confidence - duplicate.
struct ForgeReport {
    size_t generated_count = 0;
    size_t conflict_dropped = 0;
    size_t low_confidence_dropped = 0;
    size_t duplicate_dropped = 0;
    size_t retained_count = 0;
    double mean_confidence = 0.0;  // over every scored indicator, kept or dropped
};

// JSONL record (de)serialization; the schema matches the store metadata
// sidecar: {"id","text","category","leaning","confidence","source_doc","origin"}.
std::string indicator_to_jsonl(const Indicator& ind);
Indicator indicator_from_jsonl(const std::string& line);

std::string forge_report_to_json(const ForgeReport& report, bool pretty = false);

}  // namespace indivec
