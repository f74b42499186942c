#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace indivec {

/// Political leaning of a text or indicator. Serialized as "left",
/// "center", "right". The numeric binding Left=0, Center=1, Right=2 is
/// fixed here and never exposed outside serialization code.
enum class Leaning : uint8_t { Left = 0, Center = 1, Right = 2 };

/// Collapsed bias label: left/right map to Biased, center to NonBiased.
/// Serialized as "biased" / "non-biased".
enum class BinaryBias : uint8_t { Biased, NonBiased };

/// Vote domain for a prediction run.
enum class LabelSpace : uint8_t { ThreeWay, Binary };

/// The five assessment dimensions indicators are generated under.
enum class BiasCategory : uint8_t {
    ToneAndLanguage,
    SourcesAndCitations,
    CoverageAndBalance,
    AgendaAndFraming,
    ExamplesAndAnalogies,
};

inline constexpr size_t kNumCategories = 5;

std::string_view to_string(Leaning l);
std::string_view to_string(BinaryBias b);
std::string_view to_string(LabelSpace s);
std::string_view to_string(BiasCategory c);  // canonical display name, e.g. "Tone and Language"

// Strict parsers for the serialized forms above. Raise FormatError on
// unknown input.
Leaning leaning_from_string(std::string_view s);
BinaryBias binary_from_string(std::string_view s);
LabelSpace space_from_string(std::string_view s);
BiasCategory category_from_string(std::string_view s);

/// Case-insensitive match against generation-output leaning tags:
/// "Left Leaning", "Left-leaning", "left", "Neutral", "center", ...
std::optional<Leaning> parse_leaning_tag(std::string_view s);

/// Case-insensitive match against the canonical category names.
std::optional<BiasCategory> parse_category_name(std::string_view s);

BinaryBias map_leaning_to_binary(Leaning l);

/// Serialized class labels of a space, in canonical order.
std::span<const std::string_view> labels_in_space(LabelSpace space);

/// Serialized form of a leaning inside a space (binary images center
/// to "non-biased", the poles to "biased").
std::string_view leaning_label_in_space(Leaning l, LabelSpace space);

/// One retrieved indicator's contribution to a prediction.
struct Vote {
    Leaning label;
    double similarity = 0.0;  // cosine, in [-1, 1]
    std::string indicator_id;
    size_t descriptor_index = 0;
};

struct VoteOutcome {
    std::string winner;                // serialized label in the vote space
    std::map<std::string, int> tally;  // serialized label -> count
};

/// Plurality vote over retrieved indicator labels. In Binary space each
/// vote's leaning is mapped to its binary image before counting. A count
/// tie falls back to the larger summed similarity, then to the
/// lexicographically smaller serialized label. Per-label similarities are
/// summed in sorted order, so the outcome is invariant under permutation
/// of the vote list.
VoteOutcome majority_vote(std::span<const Vote> votes, LabelSpace space);

}  // namespace indivec
