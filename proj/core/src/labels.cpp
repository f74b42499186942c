#include "indivec/labels.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <vector>

#include "indivec/error.hpp"

namespace indivec {

std::string_view to_string(Leaning l) {
    switch (l) {
        case Leaning::Left: return "left";
        case Leaning::Center: return "center";
        case Leaning::Right: return "right";
    }
    raise(ErrorCode::InvalidArgument, "corrupt Leaning value");
}

std::string_view to_string(BinaryBias b) {
    switch (b) {
        case BinaryBias::Biased: return "biased";
        case BinaryBias::NonBiased: return "non-biased";
    }
    raise(ErrorCode::InvalidArgument, "corrupt BinaryBias value");
}

std::string_view to_string(LabelSpace s) {
    switch (s) {
        case LabelSpace::ThreeWay: return "3way";
        case LabelSpace::Binary: return "binary";
    }
    raise(ErrorCode::InvalidArgument, "corrupt LabelSpace value");
}

std::string_view to_string(BiasCategory c) {
    switch (c) {
        case BiasCategory::ToneAndLanguage: return "Tone and Language";
        case BiasCategory::SourcesAndCitations: return "Sources and Citations";
        case BiasCategory::CoverageAndBalance: return "Coverage and Balance";
        case BiasCategory::AgendaAndFraming: return "Agenda and Framing";
        case BiasCategory::ExamplesAndAnalogies: return "Examples and Analogies";
    }
    raise(ErrorCode::InvalidArgument, "corrupt BiasCategory value");
}

Leaning leaning_from_string(std::string_view s) {
    if (s == "left") return Leaning::Left;
    if (s == "center") return Leaning::Center;
    if (s == "right") return Leaning::Right;
    raise(ErrorCode::FormatError, "unknown leaning \"" + std::string(s) + "\"");
}

BinaryBias binary_from_string(std::string_view s) {
    if (s == "biased") return BinaryBias::Biased;
    if (s == "non-biased") return BinaryBias::NonBiased;
    raise(ErrorCode::FormatError, "unknown binary label \"" + std::string(s) + "\"");
}

LabelSpace space_from_string(std::string_view s) {
    if (s == "3way") return LabelSpace::ThreeWay;
    if (s == "binary") return LabelSpace::Binary;
    raise(ErrorCode::FormatError, "unknown label space \"" + std::string(s) + "\" (expected 3way|binary)");
}

BiasCategory category_from_string(std::string_view s) {
    if (auto c = parse_category_name(s)) return *c;
    raise(ErrorCode::FormatError, "unknown bias category \"" + std::string(s) + "\"");
}

namespace {

std::string lowered(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<Leaning> parse_leaning_tag(std::string_view s) {
    const std::string t = lowered(trimmed(s));
    if (t == "left leaning" || t == "left-leaning" || t == "left") return Leaning::Left;
    if (t == "right leaning" || t == "right-leaning" || t == "right") return Leaning::Right;
    if (t == "neutral" || t == "center" || t == "centre") return Leaning::Center;
    return std::nullopt;
}

std::optional<BiasCategory> parse_category_name(std::string_view s) {
    static const std::array<BiasCategory, kNumCategories> all = {
        BiasCategory::ToneAndLanguage,   BiasCategory::SourcesAndCitations,
        BiasCategory::CoverageAndBalance, BiasCategory::AgendaAndFraming,
        BiasCategory::ExamplesAndAnalogies,
    };
    const std::string t = lowered(trimmed(s));
    for (BiasCategory c : all) {
        if (t == lowered(to_string(c))) return c;
    }
    return std::nullopt;
}

BinaryBias map_leaning_to_binary(Leaning l) {
    return l == Leaning::Center ? BinaryBias::NonBiased : BinaryBias::Biased;
}

std::span<const std::string_view> labels_in_space(LabelSpace space) {
    static constexpr std::array<std::string_view, 3> three = {"left", "center", "right"};
    static constexpr std::array<std::string_view, 2> binary = {"biased", "non-biased"};
    if (space == LabelSpace::ThreeWay) return {three.data(), three.size()};
    return {binary.data(), binary.size()};
}

std::string_view leaning_label_in_space(Leaning l, LabelSpace space) {
    if (space == LabelSpace::ThreeWay) return to_string(l);
    return to_string(map_leaning_to_binary(l));
}

VoteOutcome majority_vote(std::span<const Vote> votes, LabelSpace space) {
    if (votes.empty()) raise(ErrorCode::EmptyVotes, "majority_vote requires at least one vote");

    std::map<std::string, int> tally;
    std::map<std::string, std::vector<double>> sims;
    for (const Vote& v : votes) {
        if (!std::isfinite(v.similarity)) {
            raise(ErrorCode::InvalidArgument,
                  "non-finite similarity in vote for indicator " + v.indicator_id);
        }
        const std::string label(leaning_label_in_space(v.label, space));
        tally[label] += 1;
        sims[label].push_back(v.similarity);
    }

    // Order-independent evidence strength: sum each label's similarities
    // in sorted order.
    std::map<std::string, double> strength;
    for (auto& [label, values] : sims) {
        std::sort(values.begin(), values.end());
        double sum = 0.0;
        for (double s : values) sum += s;
        strength[label] = sum;
    }

    std::string winner;
    for (const auto& [label, count] : tally) {
        if (winner.empty()) {
            winner = label;
            continue;
        }
        const int best = tally[winner];
        if (count > best) {
            winner = label;
        } else if (count == best && strength[label] > strength[winner]) {
            winner = label;
        }
        // Equal count and strength: keep the lexicographically smaller
        // label, which is the current winner because std::map iterates
        // keys in ascending order.
    }
    return VoteOutcome{std::move(winner), std::move(tally)};
}

}  // namespace indivec
