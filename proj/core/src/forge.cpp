#include "indivec/forge.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "indivec/error.hpp"

namespace indivec {

namespace {

constexpr std::string_view kLineFormat =
    "<Category>: <indicator text> - <Left Leaning|Right Leaning|Neutral>";

void append_category_block(std::string& out, std::span<const CategoryGuide> categories,
                           bool use_desc_ex) {
    if (use_desc_ex) {
        out += "Demonstration of bias indicator categories:\n";
        for (const CategoryGuide& guide : categories) {
            out += "\n";
            out += to_string(guide.category);
            out += "\nDescription: ";
            out += guide.description;
            out += "\nLeft-leaning example: ";
            out += guide.left_example;
            out += "\nRight-leaning example: ";
            out += guide.right_example;
            out += "\nNeutral example: ";
            out += guide.neutral_example;
            out += "\n";
        }
    } else {
        out += "Bias indicator categories: ";
        for (size_t i = 0; i < categories.size(); ++i) {
            if (i > 0) out += "; ";
            out += to_string(categories[i].category);
        }
        out += "\n";
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

/// Strip list decorations the model may add: bullets and "1." / "2)" style
/// numbering.
std::string_view strip_list_prefix(std::string_view s) {
    s = trim(s);
    while (!s.empty() && (s.front() == '-' || s.front() == '*')) s = trim(s.substr(1));
    size_t digits = 0;
    while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
    if (digits > 0 && digits < s.size() && (s[digits] == '.' || s[digits] == ')')) {
        s = trim(s.substr(digits + 1));
    }
    return s;
}

std::optional<RawIndicator> parse_indicator_line(std::string_view line,
                                                 const SourceDocument& doc) {
    line = strip_list_prefix(line);
    const size_t colon = line.find(':');
    if (colon == std::string_view::npos) return std::nullopt;

    const auto category = parse_category_name(line.substr(0, colon));
    if (!category) return std::nullopt;

    std::string_view rest = trim(line.substr(colon + 1));

    // The leaning tag follows the last " - " whose suffix parses; the text
    // itself may legitimately contain dashes.
    size_t sep = rest.rfind(" - ");
    while (sep != std::string_view::npos) {
        if (parse_leaning_tag(rest.substr(sep + 3))) break;
        sep = sep == 0 ? std::string_view::npos : rest.rfind(" - ", sep - 1);
    }
    if (sep == std::string_view::npos) return std::nullopt;

    const auto leaning = parse_leaning_tag(rest.substr(sep + 3));
    const std::string_view text = trim(rest.substr(0, sep));
    if (text.empty() || text.size() > kMaxIndicatorChars) return std::nullopt;

    return RawIndicator{std::string(text), *category, *leaning, doc.id};
}

int parse_first_int(std::string_view s) {
    size_t i = 0;
    while (i < s.size() && !std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == s.size()) return -1;
    int value = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        value = value * 10 + (s[i] - '0');
        if (value > 1000) return -1;
        ++i;
    }
    return value;
}

std::string normalized_text_key(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = true;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(static_cast<char>(std::tolower(c)));
            in_space = false;
        }
    }
    if (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

}  // namespace

std::string build_indicator_prompt(const SourceDocument& doc,
                                   std::span<const CategoryGuide> categories, bool use_desc_ex) {
    if (categories.empty()) {
        raise(ErrorCode::InvalidArgument, "indicator prompt requires at least one category");
    }
    std::string out;
    out.reserve(4096 + doc.text.size());
    append_category_block(out, categories, use_desc_ex);
    out += use_desc_ex ? "\nBased on the demonstration provided above, "
                       : "\nBased on the categories provided above, ";
    out +=
        "please label the text input below with bias indicators to identify the political "
        "leaning. Write one indicator per line in the format:\n";
    out += kLineFormat;
    out += "\n\nText input:\n";
    out += doc.text;
    out += "\n\nGiven label: ";
    out += to_string(doc.gold_leaning);
    out += "\n";
    return out;
}

std::string build_verification_prompt(const RawIndicator& ind) {
    std::string out;
    out +=
        "On a scale from 1 to 10, rate your confidence that the bias indicator below signals a ";
    out += to_string(ind.leaning);
    out += " political leaning. Respond with a single integer from 1 to 10 and nothing else.\n\n";
    out += "Indicator: ";
    out += ind.text;
    out += "\n";
    return out;
}

ParsedIndicators parse_indicator_output(const std::string& response, const SourceDocument& doc) {
    ParsedIndicators out;
    std::istringstream lines(response);
    std::string line;
    while (std::getline(lines, line)) {
        if (trim(line).empty()) continue;
        if (auto raw = parse_indicator_line(line, doc)) {
            out.indicators.push_back(std::move(*raw));
        } else {
            ++out.skipped_lines;
        }
    }
    if (out.indicators.empty()) {
        raise(ErrorCode::ParseEmpty,
              "no indicators parsed from generation output for document \"" + doc.id + "\"");
    }
    return out;
}

ConflictSplit conflict_filter(std::vector<RawIndicator> raws, Leaning gold) {
    ConflictSplit split;
    for (auto& raw : raws) {
        const bool conflicting =
            (gold == Leaning::Left && raw.leaning == Leaning::Right) ||
            (gold == Leaning::Right && raw.leaning == Leaning::Left) ||
            (gold == Leaning::Center && raw.leaning != Leaning::Center);
        (conflicting ? split.dropped : split.kept).push_back(std::move(raw));
    }
    return split;
}

ConfidenceResult confidence_verify(const RawIndicator& ind, Provider& provider, int threshold) {
    if (threshold < 1 || threshold > 10) {
        raise(ErrorCode::InvalidArgument, "confidence threshold must be in [1, 10]");
    }
    const std::string prompt = build_verification_prompt(ind);
    for (int attempt = 0; attempt < 2; ++attempt) {
        const std::string response = provider.complete(prompt);
        const int score = parse_first_int(response);
        if (score >= 1 && score <= 10) {
            return ConfidenceResult{score, score >= threshold, false};
        }
    }
    return ConfidenceResult{0, false, true};
}

std::vector<Indicator> dedup(std::vector<Indicator> inds, size_t* duplicate_dropped) {
    std::vector<Indicator> out;
    out.reserve(inds.size());
    std::unordered_map<std::string, size_t> first_pos;
    size_t dropped = 0;
    for (auto& ind : inds) {
        const std::string key = normalized_text_key(ind.text);
        const auto [it, inserted] = first_pos.try_emplace(key, out.size());
        if (inserted) {
            out.push_back(std::move(ind));
        } else {
            Indicator& survivor = out[it->second];
            if (ind.confidence > survivor.confidence) survivor = std::move(ind);
            ++dropped;
        }
    }
    if (duplicate_dropped) *duplicate_dropped = dropped;
    return out;
}

namespace {

struct DocYield {
    std::vector<Indicator> indicators;
    size_t generated = 0;
    size_t conflict_dropped = 0;
    size_t low_confidence_dropped = 0;
    double score_sum = 0.0;
    size_t score_count = 0;
};

DocYield process_document(const SourceDocument& doc, Provider& provider,
                          const ForgeOptions& options) {
    DocYield yield;
    const std::string prompt =
        build_indicator_prompt(doc, default_taxonomy(), options.use_desc_ex);
    const std::string response = provider.complete(prompt);

    ParsedIndicators parsed;
    try {
        parsed = parse_indicator_output(response, doc);
    } catch (const Error& e) {
        // A document whose output yields nothing parseable contributes zero
        // indicators; only provider failures abort the run.
        if (e.code() == ErrorCode::ParseEmpty) return yield;
        throw;
    }

    yield.generated = parsed.indicators.size();
    ConflictSplit split = conflict_filter(std::move(parsed.indicators), doc.gold_leaning);
    yield.conflict_dropped = split.dropped.size();

    for (RawIndicator& raw : split.kept) {
        int confidence = 10;  // unverified indicators pass through at full confidence
        if (options.use_verification) {
            const ConfidenceResult res =
                confidence_verify(raw, provider, options.confidence_threshold);
            if (!res.parse_failed) {
                yield.score_sum += res.score;
                ++yield.score_count;
            }
            if (!res.keep) {
                ++yield.low_confidence_dropped;
                continue;
            }
            confidence = res.score;
        }
        yield.indicators.push_back(make_indicator(raw, confidence, doc.origin));
    }
    return yield;
}

}  // namespace

ForgeResult forge_database(std::span<const SourceDocument> corpus, Provider& provider,
                           const ForgeOptions& options) {
    if (corpus.empty()) raise(ErrorCode::InvalidArgument, "forge_database requires a non-empty corpus");
    if (options.confidence_threshold < 1 || options.confidence_threshold > 10) {
        raise(ErrorCode::InvalidArgument, "confidence threshold must be in [1, 10]");
    }

    ForgeResult result;
    ForgeReport& report = result.report;
    std::vector<Indicator> collected;
    std::unordered_set<std::string> done_docs;

    if (!options.checkpoint_path.empty() && std::filesystem::exists(options.checkpoint_path)) {
        std::ifstream in(options.checkpoint_path);
        if (!in) raise(ErrorCode::IoError, "cannot read checkpoint " + options.checkpoint_path);
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            Indicator ind = indicator_from_jsonl(line);
            done_docs.insert(ind.source_doc);
            collected.push_back(std::move(ind));
        }
        // Restored records count as generated and (pre-dedup) retained, so
        // the retention equation stays exact across resumes.
        report.generated_count += collected.size();
    }

    std::ofstream checkpoint;
    if (!options.checkpoint_path.empty()) {
        checkpoint.open(options.checkpoint_path, std::ios::app);
        if (!checkpoint) raise(ErrorCode::IoError, "cannot append to checkpoint " + options.checkpoint_path);
    }

    std::vector<size_t> pending;
    for (size_t i = 0; i < corpus.size(); ++i) {
        if (!done_docs.contains(corpus[i].id)) pending.push_back(i);
    }

    double score_sum = 0.0;
    size_t score_count = 0;
    const size_t workers = std::max<size_t>(1, options.parallel_docs);

    for (size_t base = 0; base < pending.size(); base += workers) {
        const size_t count = std::min(workers, pending.size() - base);
        std::vector<std::optional<DocYield>> yields(count);
        std::vector<std::exception_ptr> errors(count);

        if (count == 1) {
            try {
                yields[0] = process_document(corpus[pending[base]], provider, options);
            } catch (...) {
                errors[0] = std::current_exception();
            }
        } else {
            std::vector<std::thread> pool;
            pool.reserve(count);
            for (size_t j = 0; j < count; ++j) {
                pool.emplace_back([&, j] {
                    try {
                        yields[j] = process_document(corpus[pending[base + j]], provider, options);
                    } catch (...) {
                        errors[j] = std::current_exception();
                    }
                });
            }
            for (auto& t : pool) t.join();
        }

        // Flush completed documents in corpus order, then surface the first
        // failure with the salvage state recorded.
        std::exception_ptr first_error;
        std::string failed_doc;
        for (size_t j = 0; j < count; ++j) {
            if (errors[j]) {
                if (!first_error) {
                    first_error = errors[j];
                    failed_doc = corpus[pending[base + j]].id;
                }
                continue;
            }
            DocYield& y = *yields[j];
            report.generated_count += y.generated;
            report.conflict_dropped += y.conflict_dropped;
            report.low_confidence_dropped += y.low_confidence_dropped;
            score_sum += y.score_sum;
            score_count += y.score_count;
            for (Indicator& ind : y.indicators) {
                if (checkpoint.is_open()) checkpoint << indicator_to_jsonl(ind) << '\n';
                collected.push_back(std::move(ind));
            }
        }
        if (checkpoint.is_open()) checkpoint.flush();

        if (first_error) {
            std::string salvage = options.checkpoint_path.empty()
                                      ? "no checkpoint configured, partial results discarded"
                                      : "completed documents checkpointed at " + options.checkpoint_path;
            try {
                std::rethrow_exception(first_error);
            } catch (const Error& e) {
                raise(e.code(), "forge aborted at document \"" + failed_doc + "\": " + e.what() +
                                    " (" + salvage + ")");
            }
        }
    }

    result.indicators = dedup(std::move(collected), &report.duplicate_dropped);
    report.retained_count = result.indicators.size();
    if (score_count > 0) {
        report.mean_confidence = score_sum / static_cast<double>(score_count);
    } else if (!result.indicators.empty()) {
        double sum = 0.0;
        for (const Indicator& ind : result.indicators) sum += ind.confidence;
        report.mean_confidence = sum / static_cast<double>(result.indicators.size());
    }
    return result;
}

}  // namespace indivec
