#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "builddiff/classify.hpp"

namespace builddiff {

/// One line of the ChangeDB: a build change joined with commit metadata.
struct ChangeRecord {
    std::string commit;      // 40-hex
    std::string parent;      // 40-hex; all zeros for a root commit
    std::int64_t timestamp = 0; // commit author time, UTC seconds
    std::string file_path;   // repository-relative pom path
    BuildChange change;
    bool initial = false;    // produced by diffing against an empty tree

    bool operator==(const ChangeRecord&) const = default;
};

/// JSON Lines serialization. Field order is fixed: commit, parent, timestamp,
/// file_path, change_type, category, node_path, old_value, new_value, initial.
std::string to_json_line(const ChangeRecord& record);
ChangeRecord record_from_json_line(const std::string& line);

void write_change_db(std::ostream& out, const std::vector<ChangeRecord>& records);
std::vector<ChangeRecord> read_change_db(std::istream& in);
std::vector<ChangeRecord> read_change_db_file(const std::string& path);

struct MiningSummary {
    size_t commits_total = 0;
    size_t commits_with_build_change = 0; // BCC
    size_t commits_without = 0;           // NBCC
    size_t changes_total = 0;             // BC
    size_t merges_skipped = 0;
    size_t malformed_files = 0;
    std::vector<std::string> warnings;
};

std::string summary_to_json(const MiningSummary& summary);

} // namespace builddiff
