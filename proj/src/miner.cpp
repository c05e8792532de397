#include "builddiff/miner.hpp"

#include <filesystem>
#include <fstream>

#include "builddiff/gitio.hpp"

namespace builddiff {

namespace {

const std::string kNullParent(40, '0');

} // namespace

MiningSummary mine(const std::string& repo_path, const MinerOptions& options,
                   const std::function<void(const ChangeRecord&)>& sink) {
    GitRepo repo(repo_path);
    MiningSummary summary;

    for (const CommitInfo& commit : repo.commits_topological(options.use_committer_time)) {
        ++summary.commits_total;
        if (commit.parents.size() > 1) {
            // Merge commits carry changes already extracted on their branch.
            ++summary.merges_skipped;
            continue;
        }

        size_t emitted = 0;
        auto emit = [&](const std::string& file_path, const BuildChange& change,
                        bool initial) {
            ChangeRecord r;
            r.commit = commit.hash;
            r.parent = commit.parents.empty() ? kNullParent : commit.parents[0];
            r.timestamp = commit.author_time;
            r.file_path = file_path;
            r.change = change;
            r.initial = initial;
            sink(r);
            ++emitted;
            ++summary.changes_total;
        };
        auto warn = [&](const std::string& file_path, const std::string& what) {
            ++summary.malformed_files;
            summary.warnings.push_back("skipping " + file_path + " in " +
                                       commit.hash + ": " + what);
        };

        if (commit.parents.empty()) {
            if (options.include_initial) {
                auto entries = repo.tracked_poms(commit.hash);
                std::vector<std::string> shas;
                for (const auto& e : entries) shas.push_back(e.blob);
                auto blobs = repo.read_blobs(shas);
                for (size_t i = 0; i < entries.size(); ++i) {
                    try {
                        BuildTree tree = normalize(parse_pom(blobs[i], entries[i].path));
                        for (const BuildChange& c : classify_added_tree(tree))
                            emit(entries[i].path, c, true);
                    } catch (const Error& e) {
                        warn(entries[i].path, e.what());
                    }
                }
            }
        } else {
            auto files = repo.modified_poms(commit.hash, commit.parents[0]);
            std::vector<std::string> shas;
            for (const auto& f : files) {
                shas.push_back(f.old_blob);
                shas.push_back(f.new_blob);
            }
            auto blobs = repo.read_blobs(shas);
            for (size_t i = 0; i < files.size(); ++i) {
                const std::string& old_text = blobs[2 * i];
                const std::string& new_text = blobs[2 * i + 1];
                try {
                    for (const BuildChange& c :
                         diff_documents(old_text, new_text, options.matcher))
                        emit(files[i].path, c, false);
                } catch (const Error& e) {
                    warn(files[i].path, e.what());
                }
            }
        }

        if (emitted > 0)
            ++summary.commits_with_build_change;
        else
            ++summary.commits_without;
        if (options.progress) options.progress(summary.commits_total);
    }
    return summary;
}

MiningSummary mine_to_file(const std::string& repo_path, const std::string& out_path,
                           const MinerOptions& options) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + out_path);
    MiningSummary summary = mine(repo_path, options, [&out](const ChangeRecord& r) {
        out << to_json_line(r) << '\n';
    });
    out.close();

    std::filesystem::path sidecar =
        std::filesystem::path(out_path).parent_path() / "summary.json";
    std::ofstream sout(sidecar, std::ios::binary);
    if (!sout) throw Error("cannot open summary file: " + sidecar.string());
    sout << summary_to_json(summary);
    return summary;
}

} // namespace builddiff
