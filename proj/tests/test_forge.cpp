#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "indivec/error.hpp"
#include "indivec/forge.hpp"
#include "support/synthetic.hpp"

using namespace indivec;

namespace {

SourceDocument doc_with(Leaning gold, std::string text = "Some article body.") {
    SourceDocument doc;
    doc.id = "doc-1";
    doc.text = std::move(text);
    doc.gold_leaning = gold;
    doc.origin = "unit";
    return doc;
}

RawIndicator raw_with(Leaning leaning, std::string text = "statement") {
    return RawIndicator{std::move(text), BiasCategory::ToneAndLanguage, leaning, "doc-1"};
}

/// Provider whose complete() fails with ProviderError when the prompt
/// carries a poison marker; everything else defers to fixtures.
class FlakyProvider : public Provider {
public:
    FlakyProvider(FixtureMap fixtures, size_t dim)
        : Provider(8, dim), inner_(1, std::move(fixtures), dim) {}

private:
    std::string do_complete(const std::string& prompt) override {
        if (prompt.find("##POISON##") != std::string::npos) {
            raise(ErrorCode::ProviderError, "scripted outage");
        }
        return inner_.complete(prompt);
    }
    Embedding do_embed(const std::string& text) override { return inner_.embed_text(text); }

    MockProvider inner_;
};

}  // namespace

TEST_SUITE("forge") {

TEST_CASE("generation prompt carries demonstrations, text, and label") {
    const auto doc = doc_with(Leaning::Left, "##DOC## body text");
    const std::string prompt = build_indicator_prompt(doc, default_taxonomy(), true);
    for (std::string_view name : {"Tone and Language", "Sources and Citations",
                                  "Coverage and Balance", "Agenda and Framing",
                                  "Examples and Analogies"}) {
        CHECK(prompt.find(name) != std::string::npos);
    }
    CHECK(prompt.find("##DOC## body text") != std::string::npos);
    CHECK(prompt.find("Given label: left") != std::string::npos);
    CHECK(prompt.find("corporate greed") != std::string::npos);  // a demonstration example
}

TEST_CASE("desc&ex ablation keeps names, drops demonstrations") {
    const auto doc = doc_with(Leaning::Right);
    const std::string prompt = build_indicator_prompt(doc, default_taxonomy(), false);
    CHECK(prompt.find("Tone and Language") != std::string::npos);
    CHECK(prompt.find("Examples and Analogies") != std::string::npos);
    CHECK(prompt.find("corporate greed") == std::string::npos);
    CHECK(prompt.find("Description:") == std::string::npos);
}

TEST_CASE("empty category list is rejected") {
    CHECK_THROWS_AS(build_indicator_prompt(doc_with(Leaning::Left), {}, true), Error);
}

TEST_CASE("parse: table-style lines") {
    const auto doc = doc_with(Leaning::Center);
    const std::string response =
        "Sources and Citations: Nielsen viewer data, TechCrunch online viewership - Neutral\n"
        "Coverage and Balance: Focuses on Republican Party divisions and criticisms of Trump - "
        "Left Leaning\n"
        "hello world\n"
        "Tone and Language: Uses positive language to describe the expungement process and its "
        "potential benefits - Right Leaning\n";
    const auto parsed = parse_indicator_output(response, doc);
    REQUIRE(parsed.indicators.size() == 3);
    CHECK(parsed.skipped_lines == 1);

    CHECK(parsed.indicators[0].category == BiasCategory::SourcesAndCitations);
    CHECK(parsed.indicators[0].leaning == Leaning::Center);
    CHECK(parsed.indicators[0].text == "Nielsen viewer data, TechCrunch online viewership");

    CHECK(parsed.indicators[1].category == BiasCategory::CoverageAndBalance);
    CHECK(parsed.indicators[1].leaning == Leaning::Left);

    CHECK(parsed.indicators[2].leaning == Leaning::Right);
    CHECK(parsed.indicators[2].source_doc == "doc-1");
}

TEST_CASE("parse: tolerated decorations and embedded dashes") {
    const auto doc = doc_with(Leaning::Left);
    const std::string response =
        "- tone and language: Quotes officials - then dismisses them - left leaning\n"
        "2. Agenda and Framing: pushes a cause - Neutral\n";
    const auto parsed = parse_indicator_output(response, doc);
    REQUIRE(parsed.indicators.size() == 2);
    CHECK(parsed.indicators[0].text == "Quotes officials - then dismisses them");
    CHECK(parsed.indicators[0].leaning == Leaning::Left);
    CHECK(parsed.indicators[1].category == BiasCategory::AgendaAndFraming);
}

TEST_CASE("parse: oversized and garbage-only responses") {
    const auto doc = doc_with(Leaning::Left);
    const std::string oversized =
        "Tone and Language: " + std::string(600, 'x') + " - Neutral\n" +
        "Tone and Language: fits - Neutral\n";
    const auto parsed = parse_indicator_output(oversized, doc);
    REQUIRE(parsed.indicators.size() == 1);
    CHECK(parsed.indicators[0].text == "fits");
    CHECK(parsed.skipped_lines == 1);

    CHECK_THROWS_AS(parse_indicator_output("no structure at all", doc), Error);
    CHECK_THROWS_AS(parse_indicator_output("", doc), Error);
}

TEST_CASE("conflict filter: exhaustive truth table") {
    struct Case {
        Leaning gold;
        Leaning indicator;
        bool kept;
    };
    const Case table[] = {
        {Leaning::Left, Leaning::Left, true},    {Leaning::Left, Leaning::Center, true},
        {Leaning::Left, Leaning::Right, false},  {Leaning::Center, Leaning::Left, false},
        {Leaning::Center, Leaning::Center, true}, {Leaning::Center, Leaning::Right, false},
        {Leaning::Right, Leaning::Left, false},  {Leaning::Right, Leaning::Center, true},
        {Leaning::Right, Leaning::Right, true},
    };
    for (const Case& c : table) {
        CAPTURE(static_cast<int>(c.gold));
        CAPTURE(static_cast<int>(c.indicator));
        auto split = conflict_filter({raw_with(c.indicator)}, c.gold);
        CHECK(split.kept.size() == (c.kept ? 1 : 0));
        CHECK(split.dropped.size() == (c.kept ? 0 : 1));
    }
}

TEST_CASE("confidence verification thresholds") {
    const auto ind = raw_with(Leaning::Left, "signals strongly");
    FixtureMap fixtures = {{"signals strongly", "5"}};

    SUBCASE("score below threshold drops") {
        MockProvider provider(1, fixtures, 8);
        const auto res = confidence_verify(ind, provider, 6);
        CHECK(res.score == 5);
        CHECK_FALSE(res.keep);
    }
    SUBCASE("score equal to threshold keeps") {
        fixtures["signals strongly"] = "6";
        MockProvider provider(1, fixtures, 8);
        const auto res = confidence_verify(ind, provider, 6);
        CHECK(res.score == 6);
        CHECK(res.keep);
    }
    SUBCASE("scripted 7 passes through") {
        fixtures["signals strongly"] = "7";
        MockProvider provider(1, fixtures, 8);
        const auto res = confidence_verify(ind, provider, 6);
        CHECK(res.score == 7);
        CHECK(res.keep);
        CHECK_FALSE(res.parse_failed);
    }
    SUBCASE("non-numeric reply retried once then dropped") {
        fixtures["signals strongly"] = "cannot say";
        MockProvider provider(1, fixtures, 8);
        const auto res = confidence_verify(ind, provider, 6);
        CHECK(res.parse_failed);
        CHECK_FALSE(res.keep);
        CHECK(res.score == 0);
        CHECK(provider.requests_served() == 2);
    }
    SUBCASE("out-of-range score treated as unusable") {
        fixtures["signals strongly"] = "42";
        MockProvider provider(1, fixtures, 8);
        CHECK(confidence_verify(ind, provider, 6).parse_failed);
    }
    SUBCASE("embedded score parsed") {
        fixtures["signals strongly"] = "Confidence: 9/10";
        MockProvider provider(1, fixtures, 8);
        CHECK(confidence_verify(ind, provider, 6).score == 9);
    }
    SUBCASE("bad threshold") {
        MockProvider provider(1, fixtures, 8);
        CHECK_THROWS_AS(confidence_verify(ind, provider, 0), Error);
        CHECK_THROWS_AS(confidence_verify(ind, provider, 11), Error);
    }
}

TEST_CASE("dedup rules") {
    auto make = [](std::string text, int confidence, std::string doc) {
        auto ind = make_indicator(raw_with(Leaning::Left, std::move(text)), confidence, "unit");
        ind.source_doc = std::move(doc);
        return ind;
    };

    SUBCASE("highest confidence survives") {
        size_t dropped = 0;
        auto out = dedup({make("same text", 6, "a"), make("same text", 9, "b")}, &dropped);
        REQUIRE(out.size() == 1);
        CHECK(out[0].confidence == 9);
        CHECK(out[0].source_doc == "b");
        CHECK(dropped == 1);
    }
    SUBCASE("no duplicates: identity") {
        size_t dropped = 0;
        auto out = dedup({make("one", 5, "a"), make("two", 5, "a")}, &dropped);
        CHECK(out.size() == 2);
        CHECK(dropped == 0);
        CHECK(out[0].text == "one");
    }
    SUBCASE("confidence tie keeps the earliest") {
        auto out = dedup({make("same", 7, "first"), make("same", 7, "second"),
                          make("same", 6, "third")});
        REQUIRE(out.size() == 1);
        CHECK(out[0].confidence == 7);
        CHECK(out[0].source_doc == "first");
    }
    SUBCASE("whitespace and case normalize before comparing") {
        auto out = dedup({make("A   Big claim", 5, "a"), make("a big CLAIM", 8, "b"),
                          make("a big claims", 5, "c")});
        CHECK(out.size() == 2);
        CHECK(out[0].confidence == 8);
    }
    SUBCASE("first-occurrence order is preserved") {
        auto out = dedup({make("x", 5, "a"), make("y", 5, "a"), make("x", 9, "b")});
        REQUIRE(out.size() == 2);
        CHECK(out[0].text == "x");
        CHECK(out[0].confidence == 9);
        CHECK(out[1].text == "y");
    }
}

TEST_CASE("forge_database: hand-counted fixture run") {
    // One Left document producing 10 raws: 2 conflicting (Right), of the 8
    // surviving one scores below threshold, and two share a text (one
    // duplicate). Expect (10, 2, 1, 1, 6).
    SourceDocument doc = doc_with(Leaning::Left, "##GEN## article body");
    std::string response;
    response += "Tone and Language: keep one - Left Leaning\n";
    response += "Sources and Citations: keep two - Neutral\n";
    response += "Coverage and Balance: drop conflict one - Right Leaning\n";
    response += "Agenda and Framing: keep three - Left Leaning\n";
    response += "Examples and Analogies: weak claim - Left Leaning\n";
    response += "Tone and Language: dup claim - Left Leaning\n";
    response += "Sources and Citations: drop conflict two - Right-leaning\n";
    response += "Coverage and Balance: keep four - Neutral\n";
    response += "Agenda and Framing: dup claim - Left Leaning\n";
    response += "Examples and Analogies: keep five - Left Leaning\n";

    FixtureMap fixtures = {
        {"##GEN##", response},
        {"keep one", "8"},
        {"keep two", "9"},
        {"keep three", "7"},
        {"weak claim", "3"},  // below threshold 6
        {"dup claim", "6"},
        {"keep four", "10"},
        {"keep five", "6"},
    };
    MockProvider provider(1, fixtures, 16);

    const auto result = forge_database({&doc, 1}, provider, ForgeOptions{});
    const ForgeReport& report = result.report;
    CHECK(report.generated_count == 10);
    CHECK(report.conflict_dropped == 2);
    CHECK(report.low_confidence_dropped == 1);
    CHECK(report.duplicate_dropped == 1);
    CHECK(report.retained_count == 6);
    CHECK(result.indicators.size() == 6);
    CHECK(report.retained_count == report.generated_count - report.conflict_dropped -
                                       report.low_confidence_dropped - report.duplicate_dropped);
    // Scored set: the 8 post-conflict raws, "dup claim" verified twice.
    // (8+9+7+3+6+6+10+6)/8 = 55/8
    CHECK(report.mean_confidence == doctest::Approx(55.0 / 8.0).epsilon(1e-12));

    for (const Indicator& ind : result.indicators) {
        CHECK(ind.confidence >= 6);
        CHECK(ind.origin == "unit");
        CHECK(ind.id == indicator_content_id(ind.text, ind.category, ind.leaning));
    }
}

TEST_CASE("forge_database: verification ablation") {
    auto data = indivec::testing::make_synthetic(2, 3, 0, 16);
    MockProvider provider(7, data.fixtures, 16);
    ForgeOptions options;
    options.use_verification = false;
    const auto result = forge_database(data.corpus, provider, options);
    CHECK(result.report.low_confidence_dropped == 0);
    CHECK(result.report.mean_confidence == 10.0);
    for (const auto& ind : result.indicators) CHECK(ind.confidence == 10);
}

TEST_CASE("forge_database: retention is monotone in the threshold") {
    const auto ladder = indivec::testing::make_confidence_ladder(3, 10);
    std::set<std::string> previous;
    bool first = true;
    for (int threshold = 1; threshold <= 10; ++threshold) {
        MockProvider provider(1, ladder.fixtures, 16);
        ForgeOptions options;
        options.confidence_threshold = threshold;
        const auto result = forge_database(ladder.corpus, provider, options);
        std::set<std::string> ids;
        for (const auto& ind : result.indicators) ids.insert(ind.id);
        if (!first) {
            for (const auto& id : ids) CHECK(previous.contains(id));
            CHECK(ids.size() <= previous.size());
        }
        previous = std::move(ids);
        first = false;
    }
}

TEST_CASE("forge_database: deterministic across runs and worker counts") {
    auto data = indivec::testing::make_synthetic(3, 4, 0, 16);
    auto run = [&](size_t workers) {
        MockProvider provider(99, data.fixtures, 16, 8);
        ForgeOptions options;
        options.parallel_docs = workers;
        auto result = forge_database(data.corpus, provider, options);
        std::string serialized;
        for (const auto& ind : result.indicators) serialized += indicator_to_jsonl(ind) + "\n";
        return serialized;
    };
    const auto once = run(1);
    CHECK(once == run(1));
    CHECK(once == run(4));
}

TEST_CASE("forge_database: guards") {
    MockProvider provider(1, {}, 8);
    CHECK_THROWS_AS(forge_database({}, provider, ForgeOptions{}), Error);
    SourceDocument doc = doc_with(Leaning::Left);
    ForgeOptions bad;
    bad.confidence_threshold = 0;
    CHECK_THROWS_AS(forge_database({&doc, 1}, provider, bad), Error);
}

TEST_CASE("forge_database: checkpoint salvage and resume") {
    indivec::testing::TempDir dir("forge-ckpt");
    auto data = indivec::testing::make_synthetic(2, 3, 0, 16);  // 6 docs
    // Poison the fifth document's generation prompt.
    data.corpus[4].text += " ##POISON##";

    ForgeOptions options;
    options.checkpoint_path = dir.str("ckpt.jsonl");

    {
        FlakyProvider flaky(data.fixtures, 16);
        try {
            forge_database(data.corpus, flaky, options);
            FAIL("expected ProviderError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ProviderError);
            CHECK(std::string(e.what()).find("checkpointed") != std::string::npos);
        }
        // Four completed documents are salvaged.
        std::ifstream in(options.checkpoint_path);
        std::set<std::string> docs;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) docs.insert(indicator_from_jsonl(line).source_doc);
        }
        CHECK(docs.size() == 4);
    }

    // Heal the document and resume; the result matches a clean run.
    data.corpus[4].text = data.corpus[4].text.substr(0, data.corpus[4].text.find(" ##POISON##"));
    MockProvider provider(1, data.fixtures, 16);
    const auto resumed = forge_database(data.corpus, provider, options);

    MockProvider fresh(1, data.fixtures, 16);
    ForgeOptions clean_options;  // no checkpoint
    const auto clean = forge_database(data.corpus, fresh, clean_options);

    REQUIRE(resumed.indicators.size() == clean.indicators.size());
    std::set<std::string> resumed_ids, clean_ids;
    for (const auto& ind : resumed.indicators) resumed_ids.insert(ind.id);
    for (const auto& ind : clean.indicators) clean_ids.insert(ind.id);
    CHECK(resumed_ids == clean_ids);
    CHECK(resumed.report.retained_count ==
          resumed.report.generated_count - resumed.report.conflict_dropped -
              resumed.report.low_confidence_dropped - resumed.report.duplicate_dropped);
}

}  // TEST_SUITE
