#include "indivec/indicator.hpp"

#include <cstdio>

#include "json.hpp"

#include "indivec/error.hpp"
#include "hashing.hpp"

namespace indivec {

using nlohmann::json;

std::string_view to_string(TextLevel level) {
    return level == TextLevel::Article ? "article" : "sentence";
}

TextLevel level_from_string(std::string_view s) {
    if (s == "article") return TextLevel::Article;
    if (s == "sentence") return TextLevel::Sentence;
    raise(ErrorCode::FormatError, "unknown text level \"" + std::string(s) + "\"");
}

std::string indicator_content_id(std::string_view text, BiasCategory category, Leaning leaning) {
    std::string key;
    key.reserve(text.size() + 32);
    key.append(text);
    key.push_back('\x1f');
    key.append(to_string(category));
    key.push_back('\x1f');
    key.append(to_string(leaning));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64(key)));
    return std::string(buf);
}

Indicator make_indicator(const RawIndicator& raw, int confidence, std::string_view origin) {
    if (confidence < 1 || confidence > 10) {
        raise(ErrorCode::InvalidArgument, "indicator confidence must be in [1, 10]");
    }
    Indicator ind;
    ind.id = indicator_content_id(raw.text, raw.category, raw.leaning);
    ind.text = raw.text;
    ind.category = raw.category;
    ind.leaning = raw.leaning;
    ind.confidence = confidence;
    ind.source_doc = raw.source_doc;
    ind.origin = origin;
    return ind;
}

std::string indicator_to_jsonl(const Indicator& ind) {
    const json j = {
        {"id", ind.id},
        {"text", ind.text},
        {"category", to_string(ind.category)},
        {"leaning", to_string(ind.leaning)},
        {"confidence", ind.confidence},
        {"source_doc", ind.source_doc},
        {"origin", ind.origin},
    };
    return j.dump();
}

Indicator indicator_from_jsonl(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        raise(ErrorCode::FormatError, std::string("bad indicator record: ") + e.what());
    }
    try {
        Indicator ind;
        ind.id = j.at("id").get<std::string>();
        ind.text = j.at("text").get<std::string>();
        ind.category = category_from_string(j.at("category").get<std::string>());
        ind.leaning = leaning_from_string(j.at("leaning").get<std::string>());
        ind.confidence = j.at("confidence").get<int>();
        ind.source_doc = j.at("source_doc").get<std::string>();
        ind.origin = j.at("origin").get<std::string>();
        if (ind.confidence < 1 || ind.confidence > 10) {
            raise(ErrorCode::FormatError, "indicator confidence out of range");
        }
        return ind;
    } catch (const json::exception& e) {
        raise(ErrorCode::FormatError, std::string("bad indicator record: ") + e.what());
    }
}

std::string forge_report_to_json(const ForgeReport& report, bool pretty) {
    const json j = {
        {"generated_count", report.generated_count},
        {"conflict_dropped", report.conflict_dropped},
        {"low_confidence_dropped", report.low_confidence_dropped},
        {"duplicate_dropped", report.duplicate_dropped},
        {"retained_count", report.retained_count},
        {"mean_confidence", report.mean_confidence},
    };
    return pretty ? j.dump(2) : j.dump();
}

}  // namespace indivec
