#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "builddiff/differ.hpp"
#include "builddiff/taxonomy.hpp"

namespace builddiff {

/// A classified build change. Updates carry both values, inserts only the new
/// one, deletes only the old one; composite values are serialized subtrees.
struct BuildChange {
    std::string change_type;
    Category category = Category::General;
    std::string node_path;
    std::optional<std::string> old_value;
    std::optional<std::string> new_value;

    bool operator==(const BuildChange&) const = default;
};

/// Maps a sorted edit script to build changes. Child edits inside an inserted
/// or deleted composite are absorbed by the parent's change; edits inside a
/// plugin <configuration> collapse into one PLUGIN_CONFIGURATION_UPDATE per
/// affected configuration node; updates of identity children (groupId,
/// artifactId, id) surface as the owning composite's *_UPDATE. Nodes outside
/// the taxonomy yield UNKNOWN_* changes.
///
/// Throws UnsortedScript when diff.ops is not ordered top-down.
std::vector<BuildChange> classify(const TreeDiff& diff);

/// Changes for a file that appears with no predecessor (or disappears):
/// the whole document is one PROJECT-level insert (delete).
std::vector<BuildChange> classify_added_tree(const BuildTree& normalized_tree);
std::vector<BuildChange> classify_removed_tree(const BuildTree& normalized_tree);

/// parse -> normalize -> match -> edit script -> classify, for two document
/// texts. The main entry point for diffing a pom pair.
std::vector<BuildChange> diff_documents(const std::string& old_text,
                                        const std::string& new_text,
                                        const MatcherConfig& cfg = {});

struct EvaluationReport {
    double precision = 1.0;
    double recall = 1.0;
    size_t extracted_total = 0;
    size_t expected_total = 0;
    size_t matched = 0;

    struct PerType {
        double precision = 1.0;
        double recall = 1.0;
        size_t extracted = 0;
        size_t expected = 0;
        size_t matched = 0;
    };
    std::map<std::string, PerType> per_type;
};

/// Multiset precision/recall between extracted and expected changes, matched
/// on (change_type, node_path, old_value, new_value).
EvaluationReport evaluate(const std::vector<BuildChange>& extracted,
                          const std::vector<BuildChange>& expected);

} // namespace builddiff
