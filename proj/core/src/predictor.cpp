#include "indivec/predictor.hpp"

#include <cctype>
#include <sstream>

#include "json.hpp"

#include "indivec/error.hpp"
#include "parallel.hpp"

namespace indivec {

using nlohmann::json;

std::string_view to_string(PredictionMode mode) {
    return mode == PredictionMode::Descriptor ? "descriptor" : "direct";
}

size_t Prediction::vote_count() const {
    size_t n = 0;
    for (const auto& dm : per_descriptor) n += dm.matches.size();
    return n;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

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

}  // namespace

std::string build_descriptor_prompt(const std::string& text,
                                    std::span<const CategoryGuide> categories, bool use_desc_ex) {
    if (text.empty()) raise(ErrorCode::InvalidArgument, "descriptor prompt requires non-empty text");
    if (categories.empty()) {
        raise(ErrorCode::InvalidArgument, "descriptor prompt requires at least one category");
    }
    std::string out;
    out.reserve(4096 + text.size());
    append_category_block(out, categories, use_desc_ex);
    out += use_desc_ex ? "\nBased on the demonstration provided above, "
                       : "\nBased on the categories provided above, ";
    out +=
        "please extract bias descriptors from the text input below. Write one descriptor per "
        "line in the format:\n<Category>: <descriptor text>\nDo not add any other tags.\n\n";
    out += "Text input:\n";
    out += text;
    out += "\n";
    return out;
}

std::vector<std::string> parse_descriptors(const std::string& response, size_t max_descriptors) {
    std::vector<std::string> out;
    std::istringstream lines(response);
    std::string line;
    while (std::getline(lines, line) && out.size() < max_descriptors) {
        const std::string_view stripped = strip_list_prefix(line);
        const size_t colon = stripped.find(':');
        if (colon == std::string_view::npos) continue;
        if (!parse_category_name(stripped.substr(0, colon))) continue;
        const std::string_view text = trim(stripped.substr(colon + 1));
        if (text.empty()) continue;
        out.emplace_back(text);
    }
    if (out.empty()) raise(ErrorCode::ParseEmpty, "no descriptors parsed from provider output");
    return out;
}

namespace {

DescriptorMatches retrieve_for(Descriptor descriptor, const VectorStore& store, size_t m) {
    DescriptorMatches dm;
    dm.matches.reserve(m);
    for (const Match& match : store.top_m(descriptor.vector, m)) {
        const Indicator& meta = store.meta_at(match.index);
        dm.matches.push_back(
            PredictedMatch{match.indicator_id, meta.text, meta.leaning, match.similarity, match.rank});
    }
    dm.descriptor = std::move(descriptor);
    return dm;
}

Prediction assemble(const QueryInput& query, std::vector<DescriptorMatches> per_descriptor,
                    PredictionMode mode, LabelSpace space) {
    std::vector<Vote> votes;
    for (const DescriptorMatches& dm : per_descriptor) {
        for (const PredictedMatch& pm : dm.matches) {
            votes.push_back(Vote{pm.leaning, pm.similarity, pm.indicator_id, dm.descriptor.index});
        }
    }
    VoteOutcome outcome = majority_vote(votes, space);

    Prediction prediction;
    prediction.query_id = query.id;
    prediction.label = std::move(outcome.winner);
    prediction.tally = std::move(outcome.tally);
    prediction.mode = mode;
    prediction.per_descriptor = std::move(per_descriptor);
    return prediction;
}

Prediction predict_direct(const QueryInput& query, const VectorStore& store, Provider& provider,
                          const PredictOptions& options) {
    Descriptor descriptor{query.text, 0, provider.embed_text(query.text)};
    std::vector<DescriptorMatches> per_descriptor;
    per_descriptor.push_back(retrieve_for(std::move(descriptor), store, options.m));
    return assemble(query, std::move(per_descriptor), PredictionMode::Direct, options.space);
}

}  // namespace

Prediction predict(const QueryInput& query, const VectorStore& store, Provider& provider,
                   const PredictOptions& options) {
    if (query.text.empty()) raise(ErrorCode::InvalidArgument, "query text must be non-empty");
    if (options.m == 0) raise(ErrorCode::InvalidArgument, "predict requires m >= 1");

    if (options.mode == PredictionMode::Direct) {
        return predict_direct(query, store, provider, options);
    }

    const std::string prompt =
        build_descriptor_prompt(query.text, default_taxonomy(), options.use_desc_ex);
    const std::string response = provider.complete(prompt);

    std::vector<std::string> texts;
    try {
        texts = parse_descriptors(response, options.max_descriptors);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ParseEmpty) throw;
        if (options.fallback_to_direct) return predict_direct(query, store, provider, options);
        raise(ErrorCode::PredictionFailed,
              "query \"" + query.id + "\": descriptor generation yielded nothing usable (" +
                  e.what() + ")");
    }

    std::vector<DescriptorMatches> per_descriptor;
    per_descriptor.reserve(texts.size());
    for (size_t i = 0; i < texts.size(); ++i) {
        Embedding vector = provider.embed_text(texts[i]);
        Descriptor descriptor{std::move(texts[i]), i, std::move(vector)};
        per_descriptor.push_back(retrieve_for(std::move(descriptor), store, options.m));
    }
    return assemble(query, std::move(per_descriptor), PredictionMode::Descriptor, options.space);
}

std::vector<Prediction> predict_batch(std::span<const QueryInput> queries,
                                      const VectorStore& store, Provider& provider,
                                      const PredictOptions& options, size_t workers) {
    std::vector<Prediction> out(queries.size());
    detail::parallel_for(queries.size(), workers,
                         [&](size_t i) { out[i] = predict(queries[i], store, provider, options); });
    return out;
}

std::string explain(const Prediction& prediction, size_t top_k) {
    std::ostringstream out;
    out << "query " << prediction.query_id << " -> " << prediction.label
        << " (mode=" << to_string(prediction.mode) << ", votes=" << prediction.vote_count()
        << ")\n";
    for (const DescriptorMatches& dm : prediction.per_descriptor) {
        if (prediction.mode == PredictionMode::Direct) {
            out << "  direct match on input text\n";
        } else {
            out << "  descriptor[" << dm.descriptor.index << "]: " << dm.descriptor.text << "\n";
        }
        const size_t k = std::min(top_k, dm.matches.size());
        for (size_t i = 0; i < k; ++i) {
            const PredictedMatch& pm = dm.matches[i];
            out << "    top-" << (i + 1) << " (" << to_string(pm.leaning) << "): " << pm.text
                << "  [sim=" << pm.similarity << "]\n";
        }
    }
    return out.str();
}

std::string prediction_to_jsonl(const Prediction& prediction) {
    json descriptors = json::array();
    for (const DescriptorMatches& dm : prediction.per_descriptor) {
        json matches = json::array();
        for (const PredictedMatch& pm : dm.matches) {
            matches.push_back({
                {"indicator_id", pm.indicator_id},
                {"text", pm.text},
                {"leaning", to_string(pm.leaning)},
                {"similarity", pm.similarity},
            });
        }
        descriptors.push_back({{"text", dm.descriptor.text}, {"matches", std::move(matches)}});
    }
    const json j = {
        {"id", prediction.query_id},
        {"label", prediction.label},
        {"tally", prediction.tally},
        {"mode", to_string(prediction.mode)},
        {"descriptors", std::move(descriptors)},
    };
    return j.dump();
}

}  // namespace indivec
