#include "builddiff/differ.hpp"

#include <algorithm>
#include <unordered_map>

#include "builddiff/errors.hpp"

namespace builddiff {

namespace {

void flatten(const BuildNode& n, int parent_id, int depth, TreeView& v) {
    int id = static_cast<int>(v.nodes.size());
    v.nodes.push_back(&n);
    v.parent.push_back(parent_id);
    v.depth.push_back(depth);
    v.size.push_back(1);
    v.path.push_back(parent_id < 0 ? n.tag : v.path[parent_id] + "/" + n.tag);
    v.canon.emplace_back();
    v.children.emplace_back();
    if (parent_id >= 0) v.children[parent_id].push_back(id);

    std::string canon = n.tag + '\x1f' + n.value + '\x1e';
    for (const auto& c : n.children) {
        int child_id = static_cast<int>(v.nodes.size());
        flatten(c, id, depth + 1, v);
        v.size[id] += v.size[child_id];
        canon += v.canon[child_id];
    }
    canon += '\x1d';
    v.canon[id] = std::move(canon);
}

// Identity key of a composite: an <id> child, or the groupId/artifactId pair.
struct NodeKey {
    bool has_id = false;
    std::string_view id;
    bool has_gav = false;
    std::string_view group_id;
    std::string_view artifact_id;

    bool keyed() const { return has_id || has_gav; }
};

NodeKey node_key(const BuildNode& n) {
    NodeKey k;
    if (const BuildNode* id = n.child("id"); id != nullptr && id->is_leaf()) {
        k.has_id = true;
        k.id = id->value;
    }
    const BuildNode* g = n.child("groupId");
    const BuildNode* a = n.child("artifactId");
    if (g != nullptr && g->is_leaf() && a != nullptr && a->is_leaf()) {
        k.has_gav = true;
        k.group_id = g->value;
        k.artifact_id = a->value;
    }
    return k;
}

class Matcher {
public:
    Matcher(const TreeView& old_view, const TreeView& new_view, const MatcherConfig& cfg)
        : old_(old_view), new_(new_view), cfg_(cfg) {
        mapping_.old_to_new.assign(old_.nodes.size(), -1);
        mapping_.new_to_old.assign(new_.nodes.size(), -1);
    }

    NodeMapping run() {
        // Roots are matched unconditionally.
        map_pair(0, 0);
        return std::move(mapping_);
    }

private:
    const TreeView& old_;
    const TreeView& new_;
    MatcherConfig cfg_;
    NodeMapping mapping_;

    void map_pair(int o, int n) {
        mapping_.old_to_new[o] = n;
        mapping_.new_to_old[n] = o;
        if (old_.canon[o] == new_.canon[n]) {
            // Identical subtrees: descendants pair up preorder-wise.
            for (int off = 1; off < old_.size[o]; ++off) {
                mapping_.old_to_new[o + off] = n + off;
                mapping_.new_to_old[n + off] = o + off;
            }
            return;
        }
        match_children(o, n);
    }

    void match_children(int po, int pn) {
        const auto& old_kids = old_.children[po];
        const auto& new_kids = new_.children[pn];
        std::vector<bool> old_done(old_kids.size(), false);
        std::vector<bool> new_done(new_kids.size(), false);

        // Phase 1: identical subtrees, paired in document order.
        std::unordered_map<std::string_view, std::vector<size_t>> buckets;
        for (size_t i = 0; i < old_kids.size(); ++i)
            buckets[old_.canon[old_kids[i]]].push_back(i);
        for (auto& [_, idxs] : buckets)
            std::reverse(idxs.begin(), idxs.end()); // pop_back yields document order
        for (size_t j = 0; j < new_kids.size(); ++j) {
            auto it = buckets.find(new_.canon[new_kids[j]]);
            if (it == buckets.end() || it->second.empty()) continue;
            size_t i = it->second.back();
            it->second.pop_back();
            old_done[i] = true;
            new_done[j] = true;
            map_pair(old_kids[i], new_kids[j]);
        }

        // Phase 2: keyed composites above the similarity threshold, best
        // similarity first; the tie-break keeps the greedy choice symmetric
        // under old/new swap.
        struct Candidate {
            double sim;
            size_t oi, nj;
        };
        std::vector<Candidate> cands;
        std::vector<NodeKey> old_keys(old_kids.size()), new_keys(new_kids.size());
        for (size_t i = 0; i < old_kids.size(); ++i)
            if (!old_done[i]) old_keys[i] = node_key(*old_.nodes[old_kids[i]]);
        for (size_t j = 0; j < new_kids.size(); ++j)
            if (!new_done[j]) new_keys[j] = node_key(*new_.nodes[new_kids[j]]);

        for (size_t i = 0; i < old_kids.size(); ++i) {
            if (old_done[i] || !old_keys[i].keyed()) continue;
            for (size_t j = 0; j < new_kids.size(); ++j) {
                if (new_done[j] || !new_keys[j].keyed()) continue;
                if (old_.nodes[old_kids[i]]->tag != new_.nodes[new_kids[j]]->tag) continue;
                double sim;
                if (old_keys[i].has_id && new_keys[j].has_id) {
                    sim = levenshtein_similarity(old_keys[i].id, new_keys[j].id);
                } else if (old_keys[i].has_gav && new_keys[j].has_gav) {
                    sim = (levenshtein_similarity(old_keys[i].group_id, new_keys[j].group_id) +
                           levenshtein_similarity(old_keys[i].artifact_id,
                                                  new_keys[j].artifact_id)) /
                          2.0;
                } else {
                    continue;
                }
                if (sim > cfg_.threshold) cands.push_back({sim, i, j});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            if (a.sim != b.sim) return a.sim > b.sim;
            size_t alo = std::min(a.oi, a.nj), blo = std::min(b.oi, b.nj);
            if (alo != blo) return alo < blo;
            size_t ahi = std::max(a.oi, a.nj), bhi = std::max(b.oi, b.nj);
            if (ahi != bhi) return ahi < bhi;
            return a.oi < b.oi;
        });
        for (const auto& c : cands) {
            if (old_done[c.oi] || new_done[c.nj]) continue;
            old_done[c.oi] = true;
            new_done[c.nj] = true;
            map_pair(old_kids[c.oi], new_kids[c.nj]);
        }

        // Phase 3: remaining unkeyed same-tag siblings pair up positionally.
        std::unordered_map<std::string_view, std::vector<size_t>> leftovers;
        for (size_t i = 0; i < old_kids.size(); ++i)
            if (!old_done[i] && !old_keys[i].keyed())
                leftovers[old_.nodes[old_kids[i]]->tag].push_back(i);
        for (auto& [_, idxs] : leftovers)
            std::reverse(idxs.begin(), idxs.end());
        for (size_t j = 0; j < new_kids.size(); ++j) {
            if (new_done[j] || new_keys[j].keyed()) continue;
            auto it = leftovers.find(new_.nodes[new_kids[j]]->tag);
            if (it == leftovers.end() || it->second.empty()) continue;
            size_t i = it->second.back();
            it->second.pop_back();
            old_done[i] = true;
            new_done[j] = true;
            map_pair(old_kids[i], new_kids[j]);
        }
    }
};

int doc_order(const EditOperation& op) {
    return op.kind == EditKind::Insert ? op.new_id : op.old_id;
}

int kind_rank(EditKind k) {
    switch (k) {
        case EditKind::Delete: return 0;
        case EditKind::Update: return 1;
        case EditKind::Insert: return 2;
    }
    return 3;
}

void sort_script(std::vector<EditOperation>& ops) {
    std::sort(ops.begin(), ops.end(), [](const EditOperation& a, const EditOperation& b) {
        if (a.depth != b.depth) return a.depth < b.depth;
        if (doc_order(a) != doc_order(b)) return doc_order(a) < doc_order(b);
        return kind_rank(a.kind) < kind_rank(b.kind);
    });
}

} // namespace

TreeView TreeView::build(const BuildTree& tree) {
    TreeView v;
    v.tree = &tree;
    flatten(tree.root, -1, 0, v);
    return v;
}

size_t NodeMapping::size() const {
    size_t n = 0;
    for (int m : old_to_new)
        if (m >= 0) ++n;
    return n;
}

double levenshtein_similarity(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    const size_t n = a.size(), m = b.size();
    std::vector<size_t> prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= m; ++j) {
            size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    double dist = static_cast<double>(prev[m]);
    return 1.0 - dist / static_cast<double>(std::max(n, m));
}

NodeMapping match_trees(const TreeView& old_view, const TreeView& new_view,
                        const MatcherConfig& cfg) {
    if (cfg.threshold < 0.0 || cfg.threshold > 1.0)
        throw Error("matcher threshold must lie in [0,1]");
    return Matcher(old_view, new_view, cfg).run();
}

std::vector<EditOperation> edit_script(const TreeView& old_view, const TreeView& new_view,
                                       const NodeMapping& mapping) {
    std::vector<EditOperation> ops;
    for (int i = 0; i < static_cast<int>(old_view.nodes.size()); ++i)
        if (!mapping.mapped_old(i))
            ops.push_back({EditKind::Delete, i, -1, old_view.depth[i]});
    for (int j = 0; j < static_cast<int>(new_view.nodes.size()); ++j)
        if (!mapping.mapped_new(j))
            ops.push_back({EditKind::Insert, -1, j, new_view.depth[j]});
    for (int i = 0; i < static_cast<int>(old_view.nodes.size()); ++i) {
        int j = mapping.old_to_new[i];
        if (j >= 0 && old_view.nodes[i]->value != new_view.nodes[j]->value)
            ops.push_back({EditKind::Update, i, j, old_view.depth[i]});
    }
    sort_script(ops);
    return ops;
}

TreeDiff diff_trees(const BuildTree& old_tree, const BuildTree& new_tree,
                    const MatcherConfig& cfg) {
    TreeDiff d;
    d.old_view = TreeView::build(old_tree);
    d.new_view = TreeView::build(new_tree);
    d.mapping = match_trees(d.old_view, d.new_view, cfg);
    d.ops = edit_script(d.old_view, d.new_view, d.mapping);
    return d;
}

std::vector<EditOperation> script_for_added_tree(const TreeView& new_view) {
    std::vector<EditOperation> ops;
    ops.reserve(new_view.nodes.size());
    for (int j = 0; j < static_cast<int>(new_view.nodes.size()); ++j)
        ops.push_back({EditKind::Insert, -1, j, new_view.depth[j]});
    sort_script(ops);
    return ops;
}

std::vector<EditOperation> script_for_removed_tree(const TreeView& old_view) {
    std::vector<EditOperation> ops;
    ops.reserve(old_view.nodes.size());
    for (int i = 0; i < static_cast<int>(old_view.nodes.size()); ++i)
        ops.push_back({EditKind::Delete, i, -1, old_view.depth[i]});
    sort_script(ops);
    return ops;
}

} // namespace builddiff
