#include "indivec/taxonomy.hpp"

#include <array>

namespace indivec {

namespace {

constexpr std::array<CategoryGuide, kNumCategories> kTaxonomy = {{
    {
        BiasCategory::ToneAndLanguage,
        "Assess the overall tone of the article, including the choice of words and phrases. "
        "Look for emotionally charged language, stereotypes, or inflammatory rhetoric.",
        "The article frequently uses words like \"exploitation,\" \"inequality\" and \"corporate "
        "greed\" to describe economic issues.",
        "The article employs phrases such as \"individual liberty,\" \"free-market solutions,\" "
        "and \"personal responsibility\" to discuss social policies.",
        "The article maintains a balanced tone without resorting to emotionally charged language "
        "or bias-inducing terms.",
    },
    {
        BiasCategory::SourcesAndCitations,
        "Check the sources and citations within the article. Assess whether they are from a "
        "variety of perspectives or if they predominantly support one side of the political "
        "spectrum.",
        "The article primarily cites progressive think tanks, Left-leaning news outlets, and "
        "left-wing academics to support its arguments.",
        "The majority of sources cited in the article come from conservative publications, "
        "Right-leaning experts, and libertarian think tanks.",
        "The article includes a diverse range of sources from different political backgrounds, "
        "providing a balanced set of viewpoints.",
    },
    {
        BiasCategory::CoverageAndBalance,
        "Evaluate whether the article provides a balanced view of the topic or if it tends to "
        "favor one particular perspective.",
        "The article predominantly highlights the challenges faced by marginalized communities "
        "without sufficiently exploring counterarguments or alternative viewpoints.",
        "The article focuses on the benefits of reduced government intervention without "
        "adequately addressing potential drawbacks or opposing viewpoints.",
        "The article presents a comprehensive examination of the topic, addressing both "
        "supporting and opposing arguments with equal weight.",
    },
    {
        BiasCategory::AgendaAndFraming,
        "Determine if the article promotes a specific political agenda or frames the issue in a "
        "way that aligns with a particular ideology.",
        "The article frames climate change as an urgent crisis requiring immediate government "
        "intervention and portrays regulation as the solution.",
        "The article frames tax cuts as essential for economic growth and suggests that limited "
        "government intervention is the key to prosperity.",
        "The article objectively presents facts and allows readers to draw their own conclusions "
        "without pushing a specific agenda.",
    },
    {
        BiasCategory::ExamplesAndAnalogies,
        "Examine if the article uses examples or analogies that may be biased or misleading in "
        "their political implications.",
        "The article compares income inequality to a \"wealth gap chasm\" and uses emotionally "
        "charged analogies to convey the severity of the issue.",
        "The article uses the analogy of a \"burdened taxpayer\" to describe the negative "
        "impacts of government spending.",
        "The article avoids using biased or emotionally charged examples or analogies, sticking "
        "to objective and relevant comparisons.",
    },
}};

}  // namespace

std::span<const CategoryGuide> default_taxonomy() {
    return {kTaxonomy.data(), kTaxonomy.size()};
}

}  // namespace indivec
