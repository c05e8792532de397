#include "testutil.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "builddiff/gitio.hpp"

namespace fs = std::filesystem;

namespace testutil {

std::string fixture_dir() {
    return BUILDDIFF_FIXTURE_DIR;
}

std::string fixture_path(const std::string& rel) {
    return fixture_dir() + "/" + rel;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("testutil: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> corpus_pom_files() {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(fixture_path("poms")))
        if (entry.path().extension() == ".xml") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

std::string rand_token(Rng& rng, size_t len) {
    static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string s;
    for (size_t i = 0; i < len; ++i) s += alphabet[draw(rng, sizeof(alphabet) - 1)];
    return s;
}

size_t levenshtein_distance_oracle(const std::string& a, const std::string& b) {
    std::vector<std::vector<size_t>> d(a.size() + 1, std::vector<size_t>(b.size() + 1));
    for (size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (size_t i = 1; i <= a.size(); ++i)
        for (size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return d[a.size()][b.size()];
}

namespace {

double u_of_split(const std::vector<double>& pooled, const std::vector<size_t>& x_idx) {
    double u = 0.0;
    std::vector<bool> in_x(pooled.size(), false);
    for (size_t i : x_idx) in_x[i] = true;
    for (size_t i = 0; i < pooled.size(); ++i) {
        if (!in_x[i]) continue;
        for (size_t j = 0; j < pooled.size(); ++j) {
            if (in_x[j]) continue;
            if (pooled[i] > pooled[j]) u += 1.0;
            else if (pooled[i] == pooled[j]) u += 0.5;
        }
    }
    return u;
}

void enumerate_subsets(size_t n, size_t k, size_t start, std::vector<size_t>& cur,
                       const std::function<void(const std::vector<size_t>&)>& fn) {
    if (cur.size() == k) {
        fn(cur);
        return;
    }
    for (size_t i = start; i + (k - cur.size()) <= n; ++i) {
        cur.push_back(i);
        enumerate_subsets(n, k, i + 1, cur, fn);
        cur.pop_back();
    }
}

} // namespace

double mann_whitney_brute(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> pooled;
    pooled.insert(pooled.end(), x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());

    std::vector<size_t> obs_idx(x.size());
    for (size_t i = 0; i < x.size(); ++i) obs_idx[i] = i;
    double center = static_cast<double>(x.size()) * static_cast<double>(y.size()) / 2.0;
    double dev_obs = std::abs(u_of_split(pooled, obs_idx) - center);

    size_t total = 0, extreme = 0;
    std::vector<size_t> cur;
    enumerate_subsets(pooled.size(), x.size(), 0, cur,
                      [&](const std::vector<size_t>& idx) {
                          ++total;
                          if (std::abs(u_of_split(pooled, idx) - center) >=
                              dev_obs - 1e-12)
                              ++extreme;
                      });
    return static_cast<double>(extreme) / static_cast<double>(total);
}

double cliffs_delta_brute(const std::vector<double>& x, const std::vector<double>& y) {
    long long gt = 0, lt = 0;
    for (double a : x)
        for (double b : y) {
            if (a > b) ++gt;
            if (a < b) ++lt;
        }
    return static_cast<double>(gt - lt) /
           (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

BuildNode leaf(std::string tag, std::string value) {
    BuildNode n;
    n.tag = std::move(tag);
    n.value = std::move(value);
    return n;
}

BuildNode elem(std::string tag, std::vector<BuildNode> children) {
    BuildNode n;
    n.tag = std::move(tag);
    n.children = std::move(children);
    for (size_t i = 0; i < n.children.size(); ++i)
        n.children[i].position = static_cast<int>(i);
    return n;
}

BuildNode make_dependency(const std::string& g, const std::string& a,
                          const std::string& v) {
    std::vector<BuildNode> kids = {leaf("groupId", g), leaf("artifactId", a)};
    if (!v.empty()) kids.push_back(leaf("version", v));
    return elem("dependency", std::move(kids));
}

BuildNode make_plugin(const std::string& g, const std::string& a, const std::string& v) {
    std::vector<BuildNode> kids = {leaf("groupId", g), leaf("artifactId", a)};
    if (!v.empty()) kids.push_back(leaf("version", v));
    return elem("plugin", std::move(kids));
}

BuildNode make_profile(const std::string& id) {
    return elem("profile",
                {leaf("id", id),
                 elem("properties", {leaf("profile.flag", "true")}),
                 elem("dependencies", {make_dependency("org.sample", "lib-" + id, "1.0")})});
}

BuildTree random_pom(Rng& rng) {
    std::vector<BuildNode> kids;
    kids.push_back(leaf("modelVersion", "4.0.0"));
    kids.push_back(leaf("groupId", "org." + rand_token(rng, 6)));
    kids.push_back(leaf("artifactId", rand_token(rng, 8)));
    kids.push_back(leaf("version", std::to_string(draw(rng, 9)) + "." +
                                       std::to_string(draw(rng, 20)) + ".0"));
    if (draw(rng, 2) == 0) kids.push_back(leaf("packaging", draw(rng, 2) ? "jar" : "pom"));
    if (draw(rng, 3) == 0)
        kids.push_back(elem("parent", {leaf("groupId", "org.parent"),
                                       leaf("artifactId", "parent-" + rand_token(rng, 4)),
                                       leaf("version", "1." + std::to_string(draw(rng, 9)))}));
    if (draw(rng, 2) == 0) {
        std::vector<BuildNode> props;
        size_t np = 1 + draw(rng, 4);
        for (size_t i = 0; i < np; ++i)
            props.push_back(leaf(rand_token(rng, 5) + ".version",
                                 std::to_string(draw(rng, 10)) + "." +
                                     std::to_string(draw(rng, 10))));
        kids.push_back(elem("properties", std::move(props)));
    }
    {
        std::vector<BuildNode> deps;
        size_t nd = draw(rng, 6);
        for (size_t i = 0; i < nd; ++i) {
            BuildNode d = make_dependency("org." + rand_token(rng, 5),
                                          rand_token(rng, 7),
                                          std::to_string(draw(rng, 5)) + ".0");
            if (draw(rng, 3) == 0) d.children.push_back(leaf("scope", "test"));
            deps.push_back(std::move(d));
        }
        if (!deps.empty()) kids.push_back(elem("dependencies", std::move(deps)));
    }
    if (draw(rng, 2) == 0) {
        std::vector<BuildNode> plugins;
        size_t np = 1 + draw(rng, 3);
        for (size_t i = 0; i < np; ++i) {
            BuildNode p = make_plugin("org.apache.maven.plugins",
                                      "maven-" + rand_token(rng, 5) + "-plugin",
                                      std::to_string(1 + draw(rng, 3)) + "." +
                                          std::to_string(draw(rng, 9)));
            if (draw(rng, 2) == 0)
                p.children.push_back(
                    elem("configuration", {leaf("skip", draw(rng, 2) ? "true" : "false"),
                                           leaf("source", "1." + std::to_string(5 + draw(rng, 5)))}));
            plugins.push_back(std::move(p));
        }
        kids.push_back(elem("build", {elem("plugins", std::move(plugins))}));
    }
    if (draw(rng, 3) == 0) {
        std::vector<BuildNode> modules;
        size_t nm = 1 + draw(rng, 3);
        for (size_t i = 0; i < nm; ++i)
            modules.push_back(leaf("module", rand_token(rng, 6)));
        kids.push_back(elem("modules", std::move(modules)));
    }
    if (draw(rng, 4) == 0)
        kids.push_back(elem("profiles", {make_profile(rand_token(rng, 4))}));

    BuildTree t;
    t.root = elem("project", std::move(kids));
    t.source_id = "random";
    return t;
}

namespace {

void collect_nodes(BuildNode& n, std::vector<BuildNode*>& out) {
    out.push_back(&n);
    for (auto& c : n.children) collect_nodes(c, out);
}

} // namespace

BuildTree mutate_pom(BuildTree tree, Rng& rng) {
    size_t edits = 1 + draw(rng, 4);
    for (size_t e = 0; e < edits; ++e) {
        std::vector<BuildNode*> nodes;
        collect_nodes(tree.root, nodes);
        switch (draw(rng, 4)) {
            case 0: { // update a leaf value
                std::vector<BuildNode*> leaves;
                for (auto* n : nodes)
                    if (n->is_leaf() && n->has_value()) leaves.push_back(n);
                if (!leaves.empty())
                    leaves[draw(rng, leaves.size())]->value = rand_token(rng, 6);
                break;
            }
            case 1: { // insert a dependency
                BuildNode* deps = nullptr;
                for (auto& c : tree.root.children)
                    if (c.tag == "dependencies") deps = &c;
                if (deps == nullptr) {
                    tree.root.children.push_back(elem("dependencies", {}));
                    deps = &tree.root.children.back();
                }
                deps->children.push_back(make_dependency("org." + rand_token(rng, 5),
                                                         rand_token(rng, 7), "1.0"));
                break;
            }
            case 2: { // delete a random non-root child
                std::vector<BuildNode*> parents;
                for (auto* n : nodes)
                    if (!n->children.empty()) parents.push_back(n);
                if (!parents.empty()) {
                    BuildNode* p = parents[draw(rng, parents.size())];
                    p->children.erase(p->children.begin() +
                                      static_cast<long>(draw(rng, p->children.size())));
                }
                break;
            }
            default: { // insert a property
                BuildNode* props = nullptr;
                for (auto& c : tree.root.children)
                    if (c.tag == "properties") props = &c;
                if (props == nullptr) {
                    tree.root.children.push_back(elem("properties", {}));
                    props = &tree.root.children.back();
                }
                props->children.push_back(
                    leaf(rand_token(rng, 5) + ".flag", draw(rng, 2) ? "true" : "false"));
                break;
            }
        }
    }
    return tree;
}

void shuffle_siblings(BuildNode& node, Rng& rng) {
    for (size_t i = node.children.size(); i > 1; --i)
        std::swap(node.children[i - 1], node.children[draw(rng, i)]);
    for (auto& c : node.children) shuffle_siblings(c, rng);
}

namespace {

void write_decorated(const BuildNode& n, Rng& rng, std::string& out) {
    out += "<" + n.tag;
    if (draw(rng, 3) == 0)
        out += " " + rand_token(rng, 4) + "=\"" + rand_token(rng, 5) + "\"";
    out += ">";
    if (draw(rng, 4) == 0) out += "<!-- " + rand_token(rng, 6) + " -->";
    if (n.children.empty()) {
        for (char c : n.value) {
            if (c == '&') out += "&amp;";
            else if (c == '<') out += "&lt;";
            else if (c == '>') out += "&gt;";
            else out += c;
        }
    } else {
        for (const auto& c : n.children) {
            write_decorated(c, rng, out);
            if (draw(rng, 5) == 0) out += "<!--x-->";
        }
    }
    out += "</" + n.tag + ">";
}

} // namespace

std::string to_decorated_xml(const BuildNode& node, Rng& rng) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>";
    write_decorated(node, rng, out);
    return out;
}

TempDir::TempDir() {
    static int counter = 0;
    path_ = (fs::temp_directory_path() /
             ("builddiff-test-" + std::to_string(::getpid()) + "-" +
              std::to_string(counter++)))
                .string();
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void run_git(const std::string& repo, const std::vector<std::string>& args) {
    std::vector<std::string> argv = {"git", "-C", repo,
                                     "-c", "user.name=fixture",
                                     "-c", "user.email=fixture@example.org",
                                     "-c", "commit.gpgsign=false"};
    argv.insert(argv.end(), args.begin(), args.end());
    CommandResult r = run_command(argv);
    if (r.status != 0)
        throw Error("git fixture command failed: " + args[0] + ": " + r.err);
}

void git_commit_all(const std::string& repo, const std::string& message, int seq) {
    // Deterministic timestamps: one commit per hour starting 2016-01-01.
    std::string date = std::to_string(1451606400 + seq * 3600) + " +0000";
    setenv("GIT_AUTHOR_DATE", date.c_str(), 1);
    setenv("GIT_COMMITTER_DATE", date.c_str(), 1);
    run_git(repo, {"add", "-A"});
    run_git(repo, {"commit", "-q", "--allow-empty", "-m", message});
}

void write_file(const std::string& path, const std::string& content) {
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

} // namespace testutil
