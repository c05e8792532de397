#pragma once

#include <string>
#include <vector>

#include "builddiff/differ.hpp"

namespace builddiff {

enum class ChangeKind { Insert, Delete, Update };

enum class Category { Dependency, Build, Team, Repository, General };

std::string category_name(Category c);
Category parse_category(const std::string& name); // throws Error on unknown names
std::string kind_name(ChangeKind k);              // INSERT / DELETE / UPDATE

/// One taxonomy entry: a named change type governing a schema element path.
struct ChangeType {
    std::string name;         // e.g. DEPENDENCY_VERSION_UPDATE
    std::string element_path; // e.g. project/dependencies/dependency/version
    ChangeKind kind;
    Category category;
};

/// The change types a given element path participates in, plus how the
/// classifier should treat the element.
struct PathRule {
    const ChangeType* insert = nullptr;
    const ChangeType* remove = nullptr;
    const ChangeType* update = nullptr;
    // Structural wrapper (e.g. <dependencies>): produces no change of its own
    // and does not subsume its children.
    bool transparent = false;
    // The *_UPDATE type fires when an identity child (groupId/artifactId/id)
    // of this element is updated, not when the element's own value changes.
    bool identity_update = false;

    const ChangeType* for_kind(ChangeKind k) const {
        switch (k) {
            case ChangeKind::Insert: return insert;
            case ChangeKind::Delete: return remove;
            case ChangeKind::Update: return update;
        }
        return nullptr;
    }
};

/// The full generated taxonomy, in table order. Deterministic.
const std::vector<ChangeType>& taxonomy();
std::vector<ChangeType> build_taxonomy(); // copy, spec-facing convenience

/// Looks up a change type by name; nullptr when absent.
const ChangeType* find_change_type(const std::string& name);

/// Resolves the rule for a node path. Element paths under profiles map to
/// their top-level counterparts (a dependency inside a profile is still a
/// dependency); unknown paths yield nullptr.
const PathRule* find_rule(const std::string& node_path);

/// Reserved catch-all types for nodes outside the taxonomy. Not part of
/// taxonomy(); counted separately by consumers.
const ChangeType& unknown_type(ChangeKind kind);
bool is_unknown_type_name(const std::string& name);

} // namespace builddiff
