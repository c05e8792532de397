#pragma once

#include <random>
#include <string>
#include <vector>

#include "builddiff/classify.hpp"
#include "builddiff/stats.hpp"

namespace testutil {

using namespace builddiff;
using Rng = std::mt19937;

std::string fixture_dir();
std::string fixture_path(const std::string& rel);
std::string read_file(const std::string& path);
std::vector<std::string> corpus_pom_files(); // fixtures/poms/*.xml, sorted

// Uniform draw without std::uniform_int_distribution so results are identical
// across standard libraries.
inline size_t draw(Rng& rng, size_t n) {
    return static_cast<size_t>(rng() % n);
}
std::string rand_token(Rng& rng, size_t len);

// --- independent oracles -------------------------------------------------

// Full-matrix Levenshtein distance, the reference for the similarity ratio.
size_t levenshtein_distance_oracle(const std::string& a, const std::string& b);

// Two-sided Mann-Whitney p by explicit enumeration of all C(n, n1) subsets.
// Feasible for |x|+|y| <= 12 or so.
double mann_whitney_brute(const std::vector<double>& x, const std::vector<double>& y);

// O(n*m) pairwise Cliff's Delta.
double cliffs_delta_brute(const std::vector<double>& x, const std::vector<double>& y);

// --- tree builders --------------------------------------------------------

BuildNode leaf(std::string tag, std::string value);
BuildNode elem(std::string tag, std::vector<BuildNode> children);

BuildNode make_dependency(const std::string& g, const std::string& a,
                          const std::string& v);
BuildNode make_plugin(const std::string& g, const std::string& a, const std::string& v);
BuildNode make_profile(const std::string& id);

// Random but schema-plausible pom tree.
BuildTree random_pom(Rng& rng);
// Random structural edits (leaf updates, inserts, deletes) applied to a copy.
BuildTree mutate_pom(BuildTree tree, Rng& rng);
// Recursively permutes sibling order in place.
void shuffle_siblings(BuildNode& node, Rng& rng);

// Serializes with injected comments and attributes, for erasure tests.
std::string to_decorated_xml(const BuildNode& node, Rng& rng);

// --- git fixture repositories ---------------------------------------------

// Unique directory removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Runs git with a fixed author/committer identity and deterministic dates.
void run_git(const std::string& repo, const std::vector<std::string>& args);
void git_commit_all(const std::string& repo, const std::string& message, int seq);
void write_file(const std::string& path, const std::string& content);

} // namespace testutil
