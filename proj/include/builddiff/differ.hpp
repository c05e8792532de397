#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "builddiff/pom.hpp"

namespace builddiff {

struct MatcherConfig {
    double threshold = 0.65; // symbol t: keyed matches need similarity > t
};

/// Flattened preorder view of a BuildTree. Node ids are preorder indices, so
/// a subtree occupies the contiguous range [id, id + size[id]).
struct TreeView {
    const BuildTree* tree = nullptr;
    std::vector<const BuildNode*> nodes;
    std::vector<int> parent;                // -1 for the root
    std::vector<int> depth;                 // root = 0
    std::vector<int> size;                  // subtree size incl. self
    std::vector<std::string> path;          // slash-joined tags from the root
    std::vector<std::string> canon;         // canonical form; equal <=> identical subtree
    std::vector<std::vector<int>> children; // ids of direct children

    static TreeView build(const BuildTree& tree);
};

/// Injective node correspondence between two trees. Mapped nodes always have
/// the same tag and mapped parents.
struct NodeMapping {
    std::vector<int> old_to_new; // -1 when unmatched
    std::vector<int> new_to_old;

    size_t size() const;
    bool mapped_old(int id) const { return old_to_new[id] >= 0; }
    bool mapped_new(int id) const { return new_to_old[id] >= 0; }
};

enum class EditKind { Insert, Delete, Update };

struct EditOperation {
    EditKind kind;
    int old_id = -1; // absent for Insert
    int new_id = -1; // absent for Delete
    int depth = 0;
};

/// 1 - editdistance(a,b) / max(|a|,|b|); 1.0 when both strings are empty.
double levenshtein_similarity(std::string_view a, std::string_view b);

/// Three-phase matcher over normalized trees: exact subtrees first, then
/// keyed composites (id similarity, or the mean of groupId/artifactId
/// similarity, both thresholded at cfg.threshold), then positional pairing
/// of the remaining same-tag siblings. Keyed composites never fall back to
/// positional pairing.
NodeMapping match_trees(const TreeView& old_view, const TreeView& new_view,
                        const MatcherConfig& cfg);

/// Unmapped old nodes become Delete, unmapped new nodes Insert, mapped pairs
/// with differing values Update. Sorted by depth ascending, ties by document
/// order (Delete before Update before Insert).
std::vector<EditOperation> edit_script(const TreeView& old_view, const TreeView& new_view,
                                       const NodeMapping& mapping);

/// Bundle of everything one diff produces. Views keep pointers into the two
/// trees, which must outlive the diff.
struct TreeDiff {
    TreeView old_view;
    TreeView new_view;
    NodeMapping mapping;
    std::vector<EditOperation> ops;
};

/// Runs match_trees + edit_script over two already-normalized trees.
TreeDiff diff_trees(const BuildTree& old_tree, const BuildTree& new_tree,
                    const MatcherConfig& cfg = {});

/// Edit scripts against an empty tree, used when a pom file first appears in
/// (or vanishes from) a repository.
std::vector<EditOperation> script_for_added_tree(const TreeView& new_view);
std::vector<EditOperation> script_for_removed_tree(const TreeView& old_view);

} // namespace builddiff
