#pragma once

#include <map>
#include <string>
#include <vector>

#include "indivec/indicator.hpp"
#include "indivec/predictor.hpp"

namespace indivec {

/// Declarative mapping from a user-supplied JSONL or CSV file onto query
/// inputs. field_map maps the canonical fields (id, text, label, and
/// optionally level) to source columns/keys; label_map maps every observed
/// source label string to a canonical label.
///
/// Non-string source label values are normalized before lookup: numbers
/// and booleans to their JSON literal, null/missing to "", arrays and
/// objects to "" when empty and "<nonempty>" otherwise (so span-style
/// annotations can be mapped declaratively).
struct DatasetSpec {
    std::string name;
    std::string path;
    std::map<std::string, std::string> field_map;
    std::map<std::string, std::string> label_map;
};

/// Parse a spec from its JSON form:
/// {"name","path","field_map":{...},"label_map":{...}}.
DatasetSpec dataset_spec_from_json(const std::string& json_text);

/// Load rows in file order. Raises SchemaError for missing fields and
/// LabelMapError (listing row numbers and values) for unmapped labels.
std::vector<QueryInput> load_dataset(const DatasetSpec& spec);

/// Forge corpus JSONL: {"id","text","leaning"[,"level"][,"origin"]}.
std::vector<SourceDocument> load_corpus(const std::string& path);

/// Prediction/gold JSONL with {"id","label"} per line (extra keys ignored).
std::vector<std::pair<std::string, std::string>> load_labeled_ids(const std::string& path);

/// Query JSONL with {"id","text"[,"gold"][,"level"]} per line.
std::vector<QueryInput> load_queries(const std::string& path);

}  // namespace indivec
