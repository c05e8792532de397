#include "builddiff/changedb.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace builddiff {

using ordered_json = nlohmann::ordered_json;

std::string to_json_line(const ChangeRecord& r) {
    ordered_json j;
    j["commit"] = r.commit;
    j["parent"] = r.parent;
    j["timestamp"] = r.timestamp;
    j["file_path"] = r.file_path;
    j["change_type"] = r.change.change_type;
    j["category"] = category_name(r.change.category);
    j["node_path"] = r.change.node_path;
    j["old_value"] = r.change.old_value.has_value() ? ordered_json(*r.change.old_value)
                                                    : ordered_json(nullptr);
    j["new_value"] = r.change.new_value.has_value() ? ordered_json(*r.change.new_value)
                                                    : ordered_json(nullptr);
    j["initial"] = r.initial;
    return j.dump();
}

ChangeRecord record_from_json_line(const std::string& line) {
    ordered_json j = ordered_json::parse(line);
    ChangeRecord r;
    r.commit = j.at("commit").get<std::string>();
    r.parent = j.at("parent").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::int64_t>();
    r.file_path = j.at("file_path").get<std::string>();
    r.change.change_type = j.at("change_type").get<std::string>();
    r.change.category = parse_category(j.at("category").get<std::string>());
    r.change.node_path = j.at("node_path").get<std::string>();
    if (!j.at("old_value").is_null()) r.change.old_value = j["old_value"].get<std::string>();
    if (!j.at("new_value").is_null()) r.change.new_value = j["new_value"].get<std::string>();
    r.initial = j.value("initial", false);
    return r;
}

void write_change_db(std::ostream& out, const std::vector<ChangeRecord>& records) {
    for (const auto& r : records) out << to_json_line(r) << '\n';
}

std::vector<ChangeRecord> read_change_db(std::istream& in) {
    std::vector<ChangeRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(record_from_json_line(line));
    }
    return records;
}

std::vector<ChangeRecord> read_change_db_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open ChangeDB file: " + path);
    return read_change_db(in);
}

std::string summary_to_json(const MiningSummary& s) {
    ordered_json j;
    j["commits_total"] = s.commits_total;
    j["commits_with_build_change"] = s.commits_with_build_change;
    j["commits_without"] = s.commits_without;
    j["changes_total"] = s.changes_total;
    j["merges_skipped"] = s.merges_skipped;
    j["malformed_files"] = s.malformed_files;
    j["warnings"] = s.warnings;
    return j.dump(2) + "\n";
}

} // namespace builddiff
