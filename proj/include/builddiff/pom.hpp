#pragma once

#include <string>
#include <vector>

#include "builddiff/errors.hpp"

namespace builddiff {

/// One XML element of a Maven build file after preprocessing. Attributes,
/// comments and processing instructions are already gone; `value` is the
/// trimmed text content and is empty for pure container elements.
struct BuildNode {
    std::string tag;
    std::string value;                // empty means "no text content"
    std::vector<BuildNode> children;  // document order until normalize()
    int position = 0;                 // zero-based index among siblings

    bool is_leaf() const { return children.empty(); }
    bool has_value() const { return !value.empty(); }

    // Finds the first direct child with the given tag, or nullptr.
    const BuildNode* child(const std::string& child_tag) const;
};

/// A parsed pom.xml. The root element is always <project>.
struct BuildTree {
    BuildNode root;
    std::string source_id; // originating file/commit, used in diagnostics only
};

/// Parses a pom.xml document. Namespaces are reduced to local names,
/// attributes/comments/PIs are dropped, surrounding whitespace of text
/// content is trimmed and whitespace-only text is discarded.
///
/// Throws MalformedXml, UnexpectedRoot or MixedContent.
BuildTree parse_pom(const std::string& document_text, std::string source_id = "");

/// Sorts siblings at every level by (tag, recursive content key) with a
/// stable sort, then reassigns `position`. Idempotent. Strings compare by
/// code point; numeric values are not special-cased.
BuildTree normalize(BuildTree tree);
void normalize_in_place(BuildNode& node);

/// Canonical debug serialization: two-space indent, no attributes, text
/// escaped. Stable under parse_pom + normalize round trips.
std::string to_xml(const BuildTree& tree);
std::string to_xml(const BuildNode& node);

/// Single-line serialization used when a whole subtree becomes the value of
/// a change record.
std::string to_compact_xml(const BuildNode& node);

/// Structural equality of subtrees (tag, value and children, recursively).
bool subtree_equal(const BuildNode& a, const BuildNode& b);

} // namespace builddiff
