#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "builddiff/errors.hpp"

namespace builddiff {

struct CommandResult {
    int status = -1;
    std::string out;
    std::string err;
};

/// Runs a program and captures stdout/stderr, feeding `stdin_data` to it.
/// No shell is involved.
CommandResult run_command(const std::vector<std::string>& argv,
                          const std::string& stdin_data = "");

struct CommitInfo {
    std::string hash;
    std::vector<std::string> parents;
    std::int64_t author_time = 0; // UTC seconds
};

/// A pom file modified by a commit relative to its single parent.
struct PomChange {
    std::string path;
    std::string old_blob; // blob sha in the parent tree
    std::string new_blob; // blob sha in the commit tree
};

struct PomEntry {
    std::string path;
    std::string blob;
};

/// Read access to a local git repository through the git command line.
class GitRepo {
public:
    explicit GitRepo(std::string repo_path); // throws NotARepository

    /// All ref-reachable commits, parents before children. Deterministic for
    /// a fixed repository state. The timestamp is the author time unless
    /// committer_time is set.
    std::vector<CommitInfo> commits_topological(bool committer_time = false) const;

    /// pom.xml files with status M against the commit's first parent.
    /// Rename detection is off; added/deleted paths are not reported.
    std::vector<PomChange> modified_poms(const std::string& commit,
                                         const std::string& parent) const;

    /// Every tracked pom.xml in the commit's tree (for root commits).
    std::vector<PomEntry> tracked_poms(const std::string& commit) const;

    /// Blob contents in request order, one git call for the whole batch.
    std::vector<std::string> read_blobs(const std::vector<std::string>& shas) const;

    /// Independent commit-count oracle (`rev-list --all --count`).
    size_t commit_count() const;

    const std::string& path() const { return path_; }

private:
    std::string git(const std::vector<std::string>& args,
                    const std::string& stdin_data = "") const;
    std::string path_;
};

/// True when the path's final component is pom.xml.
bool is_pom_path(const std::string& path);

} // namespace builddiff
