#pragma once

#include <span>
#include <string>
#include <vector>

#include "indivec/indicator.hpp"
#include "indivec/provider.hpp"
#include "indivec/taxonomy.hpp"

namespace indivec {

struct ForgeOptions {
    int confidence_threshold = 6;  // keep scores >= threshold
    bool use_desc_ex = true;       // category demonstrations in generation prompts
    bool use_verification = true;  // backward confidence verification
    size_t parallel_docs = 1;      // worker threads over documents
    std::string checkpoint_path;   // optional append-only JSONL; enables resume
};

/// Generation prompt: category demonstrations (or bare category names when
/// use_desc_ex is off), the output line format, the document text, and the
/// gold label. Raises InvalidArgument on an empty category list.
std::string build_indicator_prompt(const SourceDocument& doc,
                                   std::span<const CategoryGuide> categories,
                                   bool use_desc_ex = true);

/// Backward-verification prompt asking for a single 1..10 confidence score.
std::string build_verification_prompt(const RawIndicator& ind);

struct ParsedIndicators {
    std::vector<RawIndicator> indicators;
    size_t skipped_lines = 0;
};

/// Parse `<Category>: <text> - <Leaning>` lines. Category and leaning are
/// matched case-insensitively against their canonical names; unparseable
/// lines are skipped and counted. Raises ParseEmpty when nothing parses.
ParsedIndicators parse_indicator_output(const std::string& response, const SourceDocument& doc);

struct ConflictSplit {
    std::vector<RawIndicator> kept;
    std::vector<RawIndicator> dropped;
};

/// Drop indicators whose leaning contradicts the document label: the
/// opposite biased pole, or any biased claim on a center document.
/// Center-labeled indicators always survive a biased document.
ConflictSplit conflict_filter(std::vector<RawIndicator> raws, Leaning gold);

struct ConfidenceResult {
    int score = 0;  // 0 when the provider never produced a usable score
    bool keep = false;
    bool parse_failed = false;
};

/// Ask the provider to score how confidently the indicator signals its
/// claimed leaning (1..10); keep iff score >= threshold. Non-numeric
/// replies are retried once, then treated as score 0 and dropped.
ConfidenceResult confidence_verify(const RawIndicator& ind, Provider& provider, int threshold);

/// Collapse exact-text duplicates (after whitespace normalization and
/// lowercasing) to the highest-confidence record; ties keep the earliest.
/// Output preserves first-occurrence order.
std::vector<Indicator> dedup(std::vector<Indicator> inds, size_t* duplicate_dropped = nullptr);

struct ForgeResult {
    std::vector<Indicator> indicators;
    ForgeReport report;
};

/// Full construction pipeline over a corpus: prompt, complete, parse,
/// conflict-filter, verify (unless ablated), dedup. Output order is
/// deterministic by (document index, line index). When a checkpoint path
/// is set, finished documents are appended as they complete and already
/// checkpointed documents are skipped on the next run; a provider failure
/// aborts with the checkpoint holding every completed document.
ForgeResult forge_database(std::span<const SourceDocument> corpus, Provider& provider,
                           const ForgeOptions& options = {});

}  // namespace indivec
