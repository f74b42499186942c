#pragma once

#include <span>
#include <string_view>

#include "indivec/labels.hpp"

namespace indivec {

/// One assessment dimension used to steer indicator generation: what to
/// look for, plus one example statement per leaning.
struct CategoryGuide {
    BiasCategory category;
    std::string_view description;
    std::string_view left_example;
    std::string_view right_example;
    std::string_view neutral_example;
};

/// The five default assessment dimensions, in canonical order.
std::span<const CategoryGuide> default_taxonomy();

}  // namespace indivec
