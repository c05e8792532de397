#include "doctest.h"

#include <fstream>
#include <set>
#include <sstream>

#include "builddiff/gitio.hpp"
#include "builddiff/miner.hpp"
#include "support/testutil.hpp"

using namespace builddiff;
using namespace testutil;

namespace {

std::string pom_with_version(const std::string& version) {
    return "<project>\n"
           "  <groupId>org.fixture</groupId>\n"
           "  <artifactId>app</artifactId>\n"
           "  <version>" + version + "</version>\n"
           "  <dependencies>\n"
           "    <dependency>\n"
           "      <groupId>org.springframework</groupId>\n"
           "      <artifactId>spring-core</artifactId>\n"
           "      <version>" + version + "</version>\n"
           "    </dependency>\n"
           "  </dependencies>\n"
           "</project>\n";
}

// repo with: root commit, one version bump, a branch with one bump merged
// back, and a commit that breaks a second pom file
struct FixtureRepo {
    TempDir dir;
    int seq = 0;

    FixtureRepo() {
        const std::string& r = dir.path();
        run_git(r, {"init", "-q", "-b", "main"});
        write_file(r + "/pom.xml", pom_with_version("1.0"));
        git_commit_all(r, "initial", seq++);

        write_file(r + "/pom.xml", pom_with_version("1.1"));
        git_commit_all(r, "bump to 1.1", seq++);

        run_git(r, {"checkout", "-q", "-b", "feature"});
        write_file(r + "/pom.xml", pom_with_version("1.2"));
        git_commit_all(r, "bump to 1.2 on branch", seq++);

        run_git(r, {"checkout", "-q", "main"});
        write_file(r + "/module/pom.xml", pom_with_version("0.1"));
        git_commit_all(r, "add module pom", seq++);

        setenv("GIT_AUTHOR_DATE", "1451638400 +0000", 1);
        setenv("GIT_COMMITTER_DATE", "1451638400 +0000", 1);
        run_git(r, {"merge", "-q", "--no-ff", "-m", "merge feature", "feature"});
        seq++;

        write_file(r + "/module/pom.xml", "<project><broken>");
        git_commit_all(r, "break module pom", seq++);
    }
};

} // namespace

TEST_CASE("mining a fixture repository") {
    FixtureRepo fixture;
    std::vector<ChangeRecord> records;
    MinerOptions opts;
    MiningSummary s = mine(fixture.dir.path(), opts,
                           [&](const ChangeRecord& r) { records.push_back(r); });

    // 6 commits total: root, bump, branch bump, module add, merge, breakage
    CHECK(s.commits_total == 6);
    CHECK(s.merges_skipped == 1);
    CHECK(s.commits_total ==
          s.commits_with_build_change + s.commits_without + s.merges_skipped);
    CHECK(s.changes_total == records.size());

    // the two version bumps each touch project/version and the dependency version
    CHECK(s.commits_with_build_change == 2);
    // root commit (initial off), module add (A status) and merge contribute nothing
    CHECK(s.malformed_files == 1);
    REQUIRE(s.warnings.size() == 1);
    CHECK(s.warnings[0].find("module/pom.xml") != std::string::npos);

    for (const auto& r : records) {
        CHECK(r.commit.size() == 40);
        CHECK(r.parent.size() == 40);
        CHECK(r.commit != r.parent);
        CHECK(r.timestamp > 0);
        CHECK(is_pom_path(r.file_path));
        CHECK_FALSE(r.initial);
    }

    std::multiset<std::string> types;
    for (const auto& r : records) types.insert(r.change.change_type);
    CHECK(types == std::multiset<std::string>{
                       "DEPENDENCY_VERSION_UPDATE", "DEPENDENCY_VERSION_UPDATE",
                       "PROJECT_VERSION_UPDATE", "PROJECT_VERSION_UPDATE"});
}

TEST_CASE("include_initial records root poms as initial inserts") {
    FixtureRepo fixture;
    std::vector<ChangeRecord> records;
    MinerOptions opts;
    opts.include_initial = true;
    MiningSummary s = mine(fixture.dir.path(), opts,
                           [&](const ChangeRecord& r) { records.push_back(r); });
    CHECK(s.commits_with_build_change == 3);
    bool found_initial = false;
    for (const auto& r : records)
        if (r.initial) {
            found_initial = true;
            CHECK(r.change.change_type == "PROJECT_INSERT");
            CHECK(r.parent == std::string(40, '0'));
        }
    CHECK(found_initial);
}

TEST_CASE("mining is deterministic and matches the commit-count oracle") {
    FixtureRepo fixture;
    std::string out1 = fixture.dir.path() + "/db1.jsonl";
    std::string out2 = fixture.dir.path() + "/db2.jsonl";
    MinerOptions opts;
    MiningSummary s1 = mine_to_file(fixture.dir.path(), out1, opts);
    MiningSummary s2 = mine_to_file(fixture.dir.path(), out2, opts);
    CHECK(read_file(out1) == read_file(out2));
    CHECK(s1.commits_total == s2.commits_total);

    GitRepo repo(fixture.dir.path());
    CHECK(s1.commits_total == repo.commit_count());

    // the sidecar lands next to the output file
    std::string summary_text = read_file(fixture.dir.path() + "/summary.json");
    CHECK(summary_text.find("\"commits_total\": 6") != std::string::npos);

    // round trip through the JSONL reader
    auto db = read_change_db_file(out1);
    CHECK(db.size() == s1.changes_total);
    if (!db.empty()) {
        std::string line = to_json_line(db[0]);
        CHECK(record_from_json_line(line) == db[0]);
    }
}

TEST_CASE("committer time is recorded when asked") {
    TempDir dir;
    run_git(dir.path(), {"init", "-q", "-b", "main"});
    write_file(dir.path() + "/pom.xml", pom_with_version("1.0"));
    git_commit_all(dir.path(), "initial", 0);
    // author and committer disagree by one day on the second commit
    write_file(dir.path() + "/pom.xml", pom_with_version("1.1"));
    setenv("GIT_AUTHOR_DATE", "1451606400 +0000", 1);
    setenv("GIT_COMMITTER_DATE", "1451692800 +0000", 1);
    run_git(dir.path(), {"add", "-A"});
    run_git(dir.path(), {"commit", "-q", "-m", "bump"});

    auto collect = [&](bool committer) {
        MinerOptions opts;
        opts.use_committer_time = committer;
        std::vector<std::int64_t> stamps;
        mine(dir.path(), opts,
             [&](const ChangeRecord& r) { stamps.push_back(r.timestamp); });
        return stamps;
    };
    auto author_stamps = collect(false);
    auto committer_stamps = collect(true);
    REQUIRE(!author_stamps.empty());
    CHECK(author_stamps[0] == 1451606400);
    CHECK(committer_stamps[0] == 1451692800);
}

TEST_CASE("repo without poms mines to an empty db") {
    TempDir dir;
    run_git(dir.path(), {"init", "-q", "-b", "main"});
    write_file(dir.path() + "/README.md", "hello\n");
    git_commit_all(dir.path(), "readme", 0);

    size_t n = 0;
    MiningSummary s = mine(dir.path(), {}, [&](const ChangeRecord&) { ++n; });
    CHECK(n == 0);
    CHECK(s.commits_total == 1);
    CHECK(s.commits_with_build_change == 0);
}

TEST_CASE("not a repository") {
    TempDir dir;
    CHECK_THROWS_AS(mine(dir.path() + "/nope", {}, [](const ChangeRecord&) {}),
                    NotARepository);
}

TEST_CASE("change records serialize with the documented field order") {
    ChangeRecord r;
    r.commit = std::string(40, '1');
    r.parent = std::string(40, '2');
    r.timestamp = 1451606400;
    r.file_path = "pom.xml";
    r.change.change_type = "DEPENDENCY_INSERT";
    r.change.category = Category::Dependency;
    r.change.node_path = "project/dependencies/dependency";
    r.change.new_value = "<dependency/>";
    std::string line = to_json_line(r);
    CHECK(line.find("{\"commit\":") == 0);
    CHECK(line.find("\"parent\":") < line.find("\"timestamp\":"));
    CHECK(line.find("\"timestamp\":") < line.find("\"file_path\":"));
    CHECK(line.find("\"old_value\":null") != std::string::npos);
    CHECK(line.find("\"initial\":false") != std::string::npos);
    CHECK(record_from_json_line(line) == r);
}
