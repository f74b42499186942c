#include "support/synthetic.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace indivec::testing {

namespace {

const char* topic_token(Leaning l) {
    switch (l) {
        case Leaning::Left: return "topicalpha";
        case Leaning::Right: return "topicbravo";
        case Leaning::Center: return "topiccharlie";
    }
    return "?";
}

const char* leaning_tag(Leaning l) {
    switch (l) {
        case Leaning::Left: return "Left Leaning";
        case Leaning::Right: return "Right Leaning";
        case Leaning::Center: return "Neutral";
    }
    return "?";
}

std::string repeated(const char* token, size_t times) {
    std::string out;
    for (size_t i = 0; i < times; ++i) {
        if (i > 0) out += ' ';
        out += token;
    }
    return out;
}

constexpr std::array<Leaning, 3> kLeanings = {Leaning::Left, Leaning::Center, Leaning::Right};

}  // namespace

SyntheticData make_synthetic(size_t docs_per_leaning, size_t indicators_per_doc,
                             size_t queries_per_leaning, size_t dim, uint64_t seed) {
    SyntheticData data;
    data.dim = dim;
    data.seed = seed;

    const auto taxonomy = default_taxonomy();

    for (Leaning leaning : kLeanings) {
        const std::string topic = topic_token(leaning);
        for (size_t d = 0; d < docs_per_leaning; ++d) {
            const std::string marker =
                "##DOC_" + std::string(to_string(leaning)) + "_" + std::to_string(d) + "##";
            SourceDocument doc;
            doc.id = std::string(to_string(leaning)) + "-doc-" + std::to_string(d);
            doc.text = marker + " " + repeated(topic.c_str(), 6) + " coverage piece d" +
                       std::to_string(d) + " filler alpha beta";
            doc.gold_leaning = leaning;
            doc.origin = "synthetic";
            data.corpus.push_back(doc);

            std::string response;
            for (size_t s = 0; s < indicators_per_doc; ++s) {
                const CategoryGuide& guide = taxonomy[s % taxonomy.size()];
                response += std::string(to_string(guide.category)) + ": " +
                            repeated(topic.c_str(), 8) + " signal d" + std::to_string(d) + " s" +
                            std::to_string(s) + " - " + leaning_tag(leaning) + "\n";
            }
            data.fixtures[marker] = response;
        }
    }

    // One fixture covers every backward-verification prompt; its marker
    // never occurs in generation or descriptor prompts.
    data.fixtures["rate your confidence"] = "8";

    size_t query_no = 0;
    for (Leaning leaning : kLeanings) {
        const std::string topic = topic_token(leaning);
        for (size_t i = 0; i < queries_per_leaning; ++i, ++query_no) {
            const std::string marker = "##QRY_" + std::to_string(query_no) + "##";
            QueryInput q;
            q.id = "q" + std::to_string(query_no);
            q.text = marker + " " + repeated(topic.c_str(), 8) + " report n" +
                     std::to_string(query_no) + " extra w" + std::to_string(query_no);
            q.gold = std::string(to_string(map_leaning_to_binary(leaning)));
            data.queries.push_back(q);

            // Descriptor count varies 2..4 so per-run means are non-trivial.
            const size_t descriptors = 2 + (query_no % 3);
            std::string response;
            for (size_t k = 0; k < descriptors; ++k) {
                const CategoryGuide& guide = taxonomy[k % taxonomy.size()];
                response += std::string(to_string(guide.category)) + ": " +
                            repeated(topic.c_str(), 4) + " emphasis q" + std::to_string(query_no) +
                            " k" + std::to_string(k) + "\n";
            }
            data.fixtures[marker] = response;
        }
    }
    return data;
}

LadderData make_confidence_ladder(size_t docs, size_t indicators_per_doc) {
    LadderData data;
    size_t global = 0;
    for (size_t d = 0; d < docs; ++d) {
        char doc_tag[8];
        std::snprintf(doc_tag, sizeof doc_tag, "d%02zu", d);
        const std::string marker = "##LADDER_" + std::string(doc_tag) + "##";

        SourceDocument doc;
        doc.id = "ladder-" + std::string(doc_tag);
        doc.text = marker + " source text for scripted verification";
        doc.gold_leaning = Leaning::Left;
        doc.origin = "ladder";
        data.corpus.push_back(doc);

        std::string response;
        for (size_t i = 0; i < indicators_per_doc; ++i, ++global) {
            char item_tag[8];
            std::snprintf(item_tag, sizeof item_tag, "i%03zu", global);
            const std::string text =
                "ladder item " + std::string(doc_tag) + " " + item_tag + " end";
            response += "Tone and Language: " + text + " - Left Leaning\n";
            const int score = static_cast<int>(global % 10) + 1;
            data.fixtures[text] = std::to_string(score);
        }
        data.fixtures[marker] = response;
    }
    return data;
}

void write_corpus_jsonl(const std::filesystem::path& path, std::span<const SourceDocument> docs) {
    std::ofstream out(path);
    for (const SourceDocument& doc : docs) {
        nlohmann::json j = {
            {"id", doc.id},
            {"text", doc.text},
            {"leaning", to_string(doc.gold_leaning)},
            {"level", to_string(doc.level)},
            {"origin", doc.origin},
        };
        out << j.dump() << '\n';
    }
}

void write_queries_jsonl(const std::filesystem::path& path, std::span<const QueryInput> queries) {
    std::ofstream out(path);
    for (const QueryInput& q : queries) {
        nlohmann::json j = {{"id", q.id}, {"text", q.text}};
        if (!q.gold.empty()) j["gold"] = q.gold;
        out << j.dump() << '\n';
    }
}

void write_fixtures_json(const std::filesystem::path& path, const FixtureMap& fixtures) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [marker, response] : fixtures) j[marker] = response;
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

TempDir::TempDir(const std::string& tag) {
    static std::atomic<uint64_t> counter{0};
    const auto stamp = std::random_device{}();
    path_ = std::filesystem::temp_directory_path() /
            ("indivec-" + tag + "-" + std::to_string(stamp) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace indivec::testing
