#pragma once

#include <functional>
#include <string>

#include "builddiff/changedb.hpp"
#include "builddiff/differ.hpp"

namespace builddiff {

struct MinerOptions {
    MatcherConfig matcher;
    // When set, pom files present in a root commit are recorded as initial
    // PROJECT-level inserts; otherwise root commits count as NBCC.
    bool include_initial = false;
    // Record committer time instead of author time.
    bool use_committer_time = false;
    // Invoked after each processed commit with the running count.
    std::function<void(size_t)> progress;
};

/// Walks every ref-reachable commit of a local repository in topological
/// order, diffs each modified pom.xml against its predecessor and streams one
/// ChangeRecord per build change to `sink`. Merge commits are skipped; pom
/// versions that fail to parse are logged in the summary and skipped without
/// aborting the mine. Output is deterministic for a fixed repository.
MiningSummary mine(const std::string& repo_path, const MinerOptions& options,
                   const std::function<void(const ChangeRecord&)>& sink);

/// mine() to a JSON Lines file, plus a summary.json sidecar in the same
/// directory.
MiningSummary mine_to_file(const std::string& repo_path, const std::string& out_path,
                           const MinerOptions& options);

} // namespace builddiff
