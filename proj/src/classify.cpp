#include "builddiff/classify.hpp"

#include <algorithm>
#include <unordered_set>

#include "builddiff/errors.hpp"

namespace builddiff {

namespace {

ChangeKind to_change_kind(EditKind k) {
    switch (k) {
        case EditKind::Insert: return ChangeKind::Insert;
        case EditKind::Delete: return ChangeKind::Delete;
        case EditKind::Update: return ChangeKind::Update;
    }
    return ChangeKind::Update;
}

std::string node_value_or_xml(const BuildNode& n) {
    return n.is_leaf() ? n.value : to_compact_xml(n);
}

bool is_identity_tag(const std::string& tag) {
    return tag == "groupId" || tag == "artifactId" || tag == "id";
}

// Identity summary of a keyed composite, mirroring the matcher's precedence:
// the <id> value when present, otherwise groupId:artifactId.
std::string identity_summary(const BuildNode& n) {
    if (const BuildNode* id = n.child("id"); id != nullptr && id->is_leaf())
        return id->value;
    const BuildNode* g = n.child("groupId");
    const BuildNode* a = n.child("artifactId");
    std::string out = (g != nullptr && g->is_leaf()) ? g->value : "";
    out += ":";
    out += (a != nullptr && a->is_leaf()) ? a->value : "";
    return out;
}

// Outermost strict ancestor tagged <configuration> that itself sits below a
// <plugin>. Returns -1 when the node is not inside plugin configuration.
int config_anchor(const TreeView& v, int node) {
    std::vector<int> chain;
    for (int p = v.parent[node]; p >= 0; p = v.parent[p]) chain.push_back(p);
    std::reverse(chain.begin(), chain.end()); // root first
    bool below_plugin = false;
    for (int id : chain) {
        const std::string& tag = v.nodes[id]->tag;
        if (tag == "configuration" && below_plugin) return id;
        if (tag == "plugin") below_plugin = true;
    }
    return -1;
}

struct Classifier {
    const TreeDiff& d;
    std::vector<char> old_subsumed;
    std::vector<char> new_subsumed;
    std::unordered_set<int> config_emitted;   // old id of the configuration node
    std::unordered_set<int> identity_emitted; // old id of the keyed composite
    std::vector<BuildChange> out;

    explicit Classifier(const TreeDiff& diff)
        : d(diff),
          old_subsumed(diff.old_view.nodes.size(), 0),
          new_subsumed(diff.new_view.nodes.size(), 0) {}

    void run() {
        for (size_t i = 1; i < d.ops.size(); ++i)
            if (d.ops[i].depth < d.ops[i - 1].depth)
                throw UnsortedScript("edit script is not sorted top-down");
        for (const EditOperation& op : d.ops) handle(op);
    }

    void handle(const EditOperation& op) {
        // Child edits of an inserted/deleted composite are part of the parent
        // change. Parents precede children in a top-down script.
        if (op.kind == EditKind::Insert) {
            int p = d.new_view.parent[op.new_id];
            if (p >= 0 && new_subsumed[p]) {
                new_subsumed[op.new_id] = 1;
                return;
            }
        } else if (op.kind == EditKind::Delete) {
            int p = d.old_view.parent[op.old_id];
            if (p >= 0 && old_subsumed[p]) {
                old_subsumed[op.old_id] = 1;
                return;
            }
        }

        if (emit_configuration_change(op)) return;
        if (emit_identity_update(op)) return;
        emit_plain(op);
    }

    // Any surviving operation strictly inside plugin <configuration> collapses
    // into one PLUGIN_CONFIGURATION_UPDATE per configuration node.
    bool emit_configuration_change(const EditOperation& op) {
        const TreeView& v = op.kind == EditKind::Insert ? d.new_view : d.old_view;
        int node = op.kind == EditKind::Insert ? op.new_id : op.old_id;
        int anchor = config_anchor(v, node);
        if (anchor < 0) return false;

        if (op.kind == EditKind::Insert) new_subsumed[op.new_id] = 1;
        if (op.kind == EditKind::Delete) old_subsumed[op.old_id] = 1;

        // A surviving operation under a configuration node implies the node
        // pair itself is mapped.
        int anchor_old = op.kind == EditKind::Insert ? d.mapping.new_to_old[anchor] : anchor;
        int anchor_new = d.mapping.old_to_new[anchor_old];
        if (!config_emitted.insert(anchor_old).second) return true;

        const ChangeType* ct = find_change_type("PLUGIN_CONFIGURATION_UPDATE");
        out.push_back(BuildChange{ct->name, ct->category, d.old_view.path[anchor_old],
                                  to_compact_xml(*d.old_view.nodes[anchor_old]),
                                  to_compact_xml(*d.new_view.nodes[anchor_new])});
        return true;
    }

    // groupId/artifactId/id updates of a keyed composite surface as the
    // composite's own *_UPDATE, at most once per composite.
    bool emit_identity_update(const EditOperation& op) {
        if (op.kind != EditKind::Update) return false;
        if (!is_identity_tag(d.old_view.nodes[op.old_id]->tag)) return false;
        int p_old = d.old_view.parent[op.old_id];
        if (p_old < 0) return false;
        const PathRule* rule = find_rule(d.old_view.path[p_old]);
        if (rule == nullptr || !rule->identity_update || rule->update == nullptr) return false;

        if (!identity_emitted.insert(p_old).second) return true;
        int p_new = d.mapping.old_to_new[p_old];
        out.push_back(BuildChange{rule->update->name, rule->update->category,
                                  d.old_view.path[p_old],
                                  identity_summary(*d.old_view.nodes[p_old]),
                                  identity_summary(*d.new_view.nodes[p_new])});
        return true;
    }

    void emit_plain(const EditOperation& op) {
        const TreeView& v = op.kind == EditKind::Insert ? d.new_view : d.old_view;
        int node = op.kind == EditKind::Insert ? op.new_id : op.old_id;
        const std::string& path = v.path[node];
        const PathRule* rule = find_rule(path);

        if (rule != nullptr && rule->transparent) {
            // Structural wrapper: nothing to record, children classify on
            // their own.
            return;
        }

        ChangeKind kind = to_change_kind(op.kind);
        const ChangeType* ct = rule != nullptr ? rule->for_kind(kind) : nullptr;
        if (ct == nullptr) ct = &unknown_type(kind);

        BuildChange change;
        change.change_type = ct->name;
        change.category = ct->category;
        change.node_path = path;
        if (op.kind != EditKind::Insert)
            change.old_value = node_value_or_xml(*d.old_view.nodes[op.old_id]);
        if (op.kind != EditKind::Delete)
            change.new_value = node_value_or_xml(*d.new_view.nodes[op.new_id]);
        out.push_back(std::move(change));

        if (op.kind == EditKind::Insert) new_subsumed[op.new_id] = 1;
        if (op.kind == EditKind::Delete) old_subsumed[op.old_id] = 1;
    }
};

// Minimal empty tree used as the missing side when a file appears/vanishes.
const BuildTree& empty_tree() {
    static const BuildTree t{BuildNode{"project", "", {}, 0}, "<empty>"};
    return t;
}

TreeDiff one_sided_diff(const BuildTree& tree, bool added) {
    TreeDiff d;
    const BuildTree& empty = empty_tree();
    d.old_view = TreeView::build(added ? empty : tree);
    d.new_view = TreeView::build(added ? tree : empty);
    d.mapping.old_to_new.assign(d.old_view.nodes.size(), -1);
    d.mapping.new_to_old.assign(d.new_view.nodes.size(), -1);
    d.ops = added ? script_for_added_tree(d.new_view) : script_for_removed_tree(d.old_view);
    return d;
}

} // namespace

std::vector<BuildChange> classify(const TreeDiff& diff) {
    Classifier c(diff);
    c.run();
    return std::move(c.out);
}

std::vector<BuildChange> classify_added_tree(const BuildTree& normalized_tree) {
    return classify(one_sided_diff(normalized_tree, true));
}

std::vector<BuildChange> classify_removed_tree(const BuildTree& normalized_tree) {
    return classify(one_sided_diff(normalized_tree, false));
}

std::vector<BuildChange> diff_documents(const std::string& old_text,
                                        const std::string& new_text,
                                        const MatcherConfig& cfg) {
    BuildTree old_tree = normalize(parse_pom(old_text, "old"));
    BuildTree new_tree = normalize(parse_pom(new_text, "new"));
    return classify(diff_trees(old_tree, new_tree, cfg));
}

EvaluationReport evaluate(const std::vector<BuildChange>& extracted,
                          const std::vector<BuildChange>& expected) {
    using Key = std::tuple<std::string, std::string, std::optional<std::string>,
                           std::optional<std::string>>;
    auto key_of = [](const BuildChange& c) {
        return Key{c.change_type, c.node_path, c.old_value, c.new_value};
    };

    std::map<Key, std::pair<size_t, size_t>> counts; // key -> (extracted, expected)
    for (const auto& c : extracted) counts[key_of(c)].first++;
    for (const auto& c : expected) counts[key_of(c)].second++;

    EvaluationReport rep;
    rep.extracted_total = extracted.size();
    rep.expected_total = expected.size();
    for (const auto& [key, ee] : counts) {
        size_t m = std::min(ee.first, ee.second);
        rep.matched += m;
        auto& pt = rep.per_type[std::get<0>(key)];
        pt.extracted += ee.first;
        pt.expected += ee.second;
        pt.matched += m;
    }
    auto ratio = [](size_t num, size_t den) {
        return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    rep.precision = ratio(rep.matched, rep.extracted_total);
    rep.recall = ratio(rep.matched, rep.expected_total);
    for (auto& [_, pt] : rep.per_type) {
        pt.precision = ratio(pt.matched, pt.extracted);
        pt.recall = ratio(pt.matched, pt.expected);
    }
    return rep;
}

} // namespace builddiff
