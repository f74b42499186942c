#include "indivec/dataset.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "indivec/error.hpp"

namespace indivec {

using nlohmann::json;

namespace {

std::ifstream open_or_raise(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::IoError, "cannot open " + path);
    return in;
}

bool has_suffix(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// RFC4180-ish CSV: quoted fields may contain commas, escaped quotes
/// ("") and newlines.
std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_has_data = false;

    char c;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_has_data = true;
                break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                row_has_data = true;
                break;
            case '\r':
                break;
            case '\n':
                if (row_has_data || !field.empty()) {
                    row.push_back(std::move(field));
                    field.clear();
                    rows.push_back(std::move(row));
                    row.clear();
                    row_has_data = false;
                }
                break;
            default:
                field.push_back(c);
                row_has_data = true;
        }
    }
    if (row_has_data || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string normalize_label_value(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array() || v.is_object()) return v.empty() ? "" : "<nonempty>";
    return v.dump();  // numbers, booleans
}

struct RawRow {
    std::map<std::string, std::string> values;  // source field -> normalized value
    size_t line = 0;                            // 1-based position in the file
};

std::vector<RawRow> read_rows(const DatasetSpec& spec) {
    std::vector<RawRow> rows;
    auto in = open_or_raise(spec.path);

    if (has_suffix(spec.path, ".csv")) {
        const auto table = parse_csv(in);
        if (table.empty()) raise(ErrorCode::SchemaError, spec.path + ": empty CSV");
        const auto& header = table[0];
        for (size_t r = 1; r < table.size(); ++r) {
            RawRow row;
            row.line = r + 1;
            for (size_t c = 0; c < header.size() && c < table[r].size(); ++c) {
                row.values[header[c]] = table[r][c];
            }
            rows.push_back(std::move(row));
        }
        return rows;
    }

    // JSONL: one object per line.
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            raise(ErrorCode::SchemaError, spec.path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!obj.is_object()) {
            raise(ErrorCode::SchemaError,
                  spec.path + ":" + std::to_string(line_no) + ": row is not a JSON object");
        }
        RawRow row;
        row.line = line_no;
        for (const auto& [key, value] : obj.items()) row.values[key] = normalize_label_value(value);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

DatasetSpec dataset_spec_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        raise(ErrorCode::FormatError, std::string("bad dataset spec: ") + e.what());
    }
    DatasetSpec spec;
    try {
        spec.name = doc.value("name", "");
        spec.path = doc.at("path").get<std::string>();
        for (const auto& [k, v] : doc.at("field_map").items()) spec.field_map[k] = v.get<std::string>();
        if (doc.contains("label_map")) {
            for (const auto& [k, v] : doc.at("label_map").items()) spec.label_map[k] = v.get<std::string>();
        }
    } catch (const json::exception& e) {
        raise(ErrorCode::FormatError, std::string("bad dataset spec: ") + e.what());
    }
    for (const char* required : {"id", "text", "label"}) {
        if (!spec.field_map.contains(required)) {
            raise(ErrorCode::SchemaError, "dataset spec field_map is missing \"" + std::string(required) + "\"");
        }
    }
    return spec;
}

std::vector<QueryInput> load_dataset(const DatasetSpec& spec) {
    const auto rows = read_rows(spec);

    const std::string& id_field = spec.field_map.at("id");
    const std::string& text_field = spec.field_map.at("text");
    const std::string& label_field = spec.field_map.at("label");
    const auto level_it = spec.field_map.find("level");

    std::vector<QueryInput> out;
    out.reserve(rows.size());
    std::vector<std::string> bad_labels;

    for (const RawRow& row : rows) {
        for (const std::string* field : {&id_field, &text_field, &label_field}) {
            if (!row.values.contains(*field)) {
                raise(ErrorCode::SchemaError, spec.path + ":" + std::to_string(row.line) +
                                                  ": missing field \"" + *field + "\"");
            }
        }
        QueryInput q;
        q.id = row.values.at(id_field);
        q.text = row.values.at(text_field);
        if (level_it != spec.field_map.end() && row.values.contains(level_it->second)) {
            q.level = level_from_string(row.values.at(level_it->second));
        }

        const std::string& source_label = row.values.at(label_field);
        const auto mapped = spec.label_map.find(source_label);
        if (mapped == spec.label_map.end()) {
            bad_labels.push_back("row " + std::to_string(row.line) + ": \"" + source_label + "\"");
        } else {
            q.gold = mapped->second;
        }
        out.push_back(std::move(q));
    }

    if (!bad_labels.empty()) {
        std::string detail;
        const size_t shown = std::min<size_t>(bad_labels.size(), 10);
        for (size_t i = 0; i < shown; ++i) {
            if (i > 0) detail += ", ";
            detail += bad_labels[i];
        }
        if (bad_labels.size() > shown) {
            detail += ", ... (" + std::to_string(bad_labels.size() - shown) + " more)";
        }
        raise(ErrorCode::LabelMapError,
              spec.path + ": " + std::to_string(bad_labels.size()) + " unmapped labels: " + detail);
    }
    return out;
}

std::vector<SourceDocument> load_corpus(const std::string& path) {
    auto in = open_or_raise(path);
    std::vector<SourceDocument> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json obj = json::parse(line);
            SourceDocument doc;
            doc.id = obj.at("id").get<std::string>();
            doc.text = obj.at("text").get<std::string>();
            doc.gold_leaning = leaning_from_string(obj.at("leaning").get<std::string>());
            if (obj.contains("level")) doc.level = level_from_string(obj.at("level").get<std::string>());
            if (obj.contains("origin")) doc.origin = obj.at("origin").get<std::string>();
            if (doc.text.empty()) {
                raise(ErrorCode::SchemaError,
                      path + ":" + std::to_string(line_no) + ": empty document text");
            }
            out.push_back(std::move(doc));
        } catch (const json::exception& e) {
            raise(ErrorCode::SchemaError, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> load_labeled_ids(const std::string& path) {
    auto in = open_or_raise(path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json obj = json::parse(line);
            out.emplace_back(obj.at("id").get<std::string>(), obj.at("label").get<std::string>());
        } catch (const json::exception& e) {
            raise(ErrorCode::SchemaError, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<QueryInput> load_queries(const std::string& path) {
    auto in = open_or_raise(path);
    std::vector<QueryInput> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json obj = json::parse(line);
            QueryInput q;
            q.id = obj.at("id").get<std::string>();
            q.text = obj.at("text").get<std::string>();
            if (obj.contains("gold")) q.gold = obj.at("gold").get<std::string>();
            if (obj.contains("level")) q.level = level_from_string(obj.at("level").get<std::string>());
            out.push_back(std::move(q));
        } catch (const json::exception& e) {
            raise(ErrorCode::SchemaError, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace indivec
