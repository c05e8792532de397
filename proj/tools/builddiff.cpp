#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "builddiff/changedb.hpp"
#include "builddiff/classify.hpp"
#include "builddiff/miner.hpp"
#include "builddiff/releases.hpp"
#include "builddiff/stats.hpp"
#include "builddiff/taxonomy.hpp"

namespace {

using namespace builddiff;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitChangesFound = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ordered_json change_to_json(const BuildChange& c) {
    ordered_json j;
    j["change_type"] = c.change_type;
    j["category"] = category_name(c.category);
    j["node_path"] = c.node_path;
    j["old_value"] = c.old_value ? ordered_json(*c.old_value) : ordered_json(nullptr);
    j["new_value"] = c.new_value ? ordered_json(*c.new_value) : ordered_json(nullptr);
    return j;
}

void print_change_line(const BuildChange& c) {
    std::cout << c.change_type << ' ' << c.node_path << ' ';
    if (c.old_value && c.new_value)
        std::cout << *c.old_value << " -> " << *c.new_value;
    else if (c.new_value)
        std::cout << "-> " << *c.new_value;
    else if (c.old_value)
        std::cout << *c.old_value << " ->";
    std::cout << '\n';
}

std::vector<int> parse_ks(const std::string& spec) {
    std::vector<int> ks;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int k = std::stoi(item);
        if (k < 1) throw Error("window size must be >= 1, got " + item);
        ks.push_back(k);
    }
    if (ks.empty()) throw Error("no window sizes given");
    return ks;
}

int cmd_diff(const std::string& old_file, const std::string& new_file, double threshold,
             bool json, bool dump_script, bool fail_on_change) {
    MatcherConfig cfg{threshold};
    BuildTree old_tree = normalize(parse_pom(read_file(old_file), old_file));
    BuildTree new_tree = normalize(parse_pom(read_file(new_file), new_file));
    TreeDiff diff = diff_trees(old_tree, new_tree, cfg);
    std::vector<BuildChange> changes = classify(diff);

    if (json || dump_script) {
        ordered_json out;
        out["changes"] = ordered_json::array();
        for (const auto& c : changes) out["changes"].push_back(change_to_json(c));
        if (dump_script) {
            ordered_json script = ordered_json::array();
            for (const auto& op : diff.ops) {
                ordered_json j;
                switch (op.kind) {
                    case EditKind::Insert: j["kind"] = "insert"; break;
                    case EditKind::Delete: j["kind"] = "delete"; break;
                    case EditKind::Update: j["kind"] = "update"; break;
                }
                j["path"] = op.kind == EditKind::Insert ? diff.new_view.path[op.new_id]
                                                        : diff.old_view.path[op.old_id];
                j["old_value"] = op.old_id >= 0
                                     ? ordered_json(diff.old_view.nodes[op.old_id]->value)
                                     : ordered_json(nullptr);
                j["new_value"] = op.new_id >= 0
                                     ? ordered_json(diff.new_view.nodes[op.new_id]->value)
                                     : ordered_json(nullptr);
                j["depth"] = op.depth;
                script.push_back(j);
            }
            out["edit_script"] = script;
        }
        std::cout << out.dump(2) << '\n';
    } else {
        for (const auto& c : changes) print_change_line(c);
    }
    if (fail_on_change && !changes.empty()) return kExitChangesFound;
    return kExitOk;
}

int cmd_taxonomy(bool json) {
    const auto& types = taxonomy();
    if (json) {
        ordered_json out = ordered_json::array();
        for (const auto& t : types) {
            ordered_json j;
            j["name"] = t.name;
            j["element_path"] = t.element_path;
            j["kind"] = kind_name(t.kind);
            j["category"] = category_name(t.category);
            out.push_back(j);
        }
        std::cout << out.dump(2) << '\n';
    } else {
        for (const auto& t : types)
            std::cout << t.name << '\t' << t.element_path << '\t' << kind_name(t.kind)
                      << '\t' << category_name(t.category) << '\n';
        std::cerr << types.size() << " change types\n";
    }
    return kExitOk;
}

int cmd_mine(const std::string& repo, const std::string& out_path, double threshold,
             bool include_initial, bool committer_time, int verbosity) {
    MinerOptions opts;
    opts.matcher.threshold = threshold;
    opts.include_initial = include_initial;
    opts.use_committer_time = committer_time;
    if (verbosity > 0)
        opts.progress = [](size_t n) {
            if (n % 1000 == 0) std::cerr << "processed " << n << " commits\n";
        };
    MiningSummary s = mine_to_file(repo, out_path, opts);
    for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "commits " << s.commits_total << ", with build change "
              << s.commits_with_build_change << ", without " << s.commits_without
              << ", merges skipped " << s.merges_skipped << ", changes "
              << s.changes_total << ", malformed files " << s.malformed_files << '\n';
    return kExitOk;
}

int cmd_stats_frequency(const std::string& db_path, bool json) {
    auto db = read_change_db_file(db_path);
    FrequencyReport rep = frequency_report(db);
    if (json) {
        ordered_json out;
        out["total_changes"] = rep.total_changes;
        out["per_category"] = rep.per_category;
        ordered_json types = ordered_json::array();
        for (const auto& [name, freq] : rep.ranked_types()) {
            ordered_json j;
            j["change_type"] = name;
            j["count"] = rep.type_counts.at(name);
            j["frequency"] = freq;
            types.push_back(j);
        }
        out["per_type"] = types;
        out["top10_share"] = rep.top_share(10);
        std::cout << out.dump(2) << '\n';
    } else {
        std::cout << "total changes: " << rep.total_changes << '\n';
        std::cout << "\nper category:\n";
        for (const auto& [name, freq] : rep.per_category)
            std::printf("  %-20s %8.4f\n", name.c_str(), freq);
        std::cout << "\nper type:\n";
        for (const auto& [name, freq] : rep.ranked_types())
            std::printf("  %-40s %8.4f (%zu)\n", name.c_str(), freq,
                        rep.type_counts.at(name));
        std::printf("\ntop 10 share: %.4f\n", rep.top_share(10));
    }
    return kExitOk;
}

int cmd_stats_proximity(const std::string& db_path, const std::string& releases_path,
                        const std::string& k_spec, bool json,
                        const std::string& series_out, bool one_sided,
                        bool commit_days_only) {
    auto db = read_change_db_file(db_path);
    auto releases = read_releases_csv_file(releases_path);
    ProximityOptions opts;
    opts.side = one_sided ? TestSide::Greater : TestSide::TwoSided;
    opts.commit_days_only = commit_days_only;
    ProximityReport rep = release_proximity_report(db, releases, parse_ks(k_spec), opts);

    if (!series_out.empty()) {
        std::ofstream out(series_out, std::ios::binary);
        if (!out) throw Error("cannot open " + series_out);
        write_series_csv(out, rep.raw, releases);
    }

    if (json) {
        ordered_json rows = ordered_json::array();
        for (const auto& row : rep.rows) {
            ordered_json j;
            j["k"] = row.k;
            j["n_near"] = row.result.n_near;
            j["n_far"] = row.result.n_far;
            if (row.no_releases) {
                j["no_releases"] = true;
            } else if (row.degenerate) {
                j["degenerate"] = true;
            } else {
                j["p_value"] = row.result.p_value;
                j["delta"] = row.result.delta;
                j["magnitude"] = magnitude_name(row.result.magnitude);
            }
            rows.push_back(j);
        }
        std::cout << ordered_json{{"rows", rows}}.dump(2) << '\n';
    } else {
        std::printf("%4s %8s %8s %12s %8s %s\n", "k", "n_near", "n_far", "p", "d",
                    "magnitude");
        for (const auto& row : rep.rows) {
            if (!row.computed()) {
                std::printf("%4d %8zu %8zu %12s %8s %s\n", row.k, row.result.n_near,
                            row.result.n_far, "-", "-",
                            row.no_releases ? "no releases" : "degenerate partition");
            } else {
                std::printf("%4d %8zu %8zu %12.3e %8.3f %s\n", row.k, row.result.n_near,
                            row.result.n_far, row.result.p_value, row.result.delta,
                            magnitude_name(row.result.magnitude).c_str());
            }
        }
    }
    return kExitOk;
}

int cmd_releases_fetch(const std::string& owner_repo, const std::string& out_path,
                       const std::string& api_base) {
    FetchOptions opts;
    if (!api_base.empty()) opts.api_base = api_base;
    if (const char* tok = std::getenv("BUILDDIFF_GITHUB_TOKEN"); tok != nullptr)
        opts.token = tok;
    else if (const char* tok2 = std::getenv("GITHUB_TOKEN"); tok2 != nullptr)
        opts.token = tok2;

    auto releases = fetch_releases(owner_repo, opts);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot open " + out_path);
    write_releases_csv(out, releases);
    std::cout << releases.size() << " releases written to " << out_path << '\n';
    return kExitOk;
}

int cmd_evaluate(const std::string& extracted_path, const std::string& expected_path,
                 bool json) {
    auto extracted_db = read_change_db_file(extracted_path);
    auto expected_db = read_change_db_file(expected_path);
    std::vector<BuildChange> extracted, expected;
    for (const auto& r : extracted_db) extracted.push_back(r.change);
    for (const auto& r : expected_db) expected.push_back(r.change);
    EvaluationReport rep = evaluate(extracted, expected);

    if (json) {
        ordered_json out;
        out["precision"] = rep.precision;
        out["recall"] = rep.recall;
        out["extracted"] = rep.extracted_total;
        out["expected"] = rep.expected_total;
        out["matched"] = rep.matched;
        ordered_json per_type;
        for (const auto& [name, pt] : rep.per_type) {
            ordered_json j;
            j["precision"] = pt.precision;
            j["recall"] = pt.recall;
            j["extracted"] = pt.extracted;
            j["expected"] = pt.expected;
            j["matched"] = pt.matched;
            per_type[name] = j;
        }
        out["per_type"] = per_type;
        std::cout << out.dump(2) << '\n';
    } else {
        std::printf("precision %.4f  recall %.4f  (%zu extracted, %zu expected, %zu matched)\n",
                    rep.precision, rep.recall, rep.extracted_total, rep.expected_total,
                    rep.matched);
        for (const auto& [name, pt] : rep.per_type)
            std::printf("  %-40s precision %.4f recall %.4f\n", name.c_str(),
                        pt.precision, pt.recall);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fine-grained build-change extraction for Maven pom.xml histories"};
    app.require_subcommand(1);
    int verbosity = 0;
    app.add_flag("-v,--verbose", verbosity, "more diagnostics on stderr");

    // diff
    std::string old_file, new_file;
    double threshold = 0.65;
    bool json = false, dump_script = false, fail_on_change = false;
    CLI::App* diff = app.add_subcommand("diff", "Classify changes between two pom files");
    diff->add_option("old", old_file, "old pom.xml")->required();
    diff->add_option("new", new_file, "new pom.xml")->required();
    diff->add_option("--threshold", threshold, "matcher similarity threshold")
        ->check(CLI::Range(0.0, 1.0));
    diff->add_flag("--json", json, "JSON output");
    diff->add_flag("--edit-script", dump_script, "include the raw edit script (JSON)");
    diff->add_flag("--fail-on-change", fail_on_change, "exit 3 when changes exist");

    // taxonomy
    bool tax_json = false;
    CLI::App* tax = app.add_subcommand("taxonomy", "List the change-type taxonomy");
    tax->add_flag("--json", tax_json, "JSON output");

    // mine
    std::string repo, mine_out;
    double mine_threshold = 0.65;
    bool include_initial = false;
    CLI::App* mine_cmd = app.add_subcommand("mine", "Mine a git history into a ChangeDB");
    mine_cmd->add_option("repo", repo, "path to a local git repository")->required();
    mine_cmd->add_option("--out", mine_out, "output ChangeDB (JSON Lines)")->required();
    mine_cmd->add_option("--threshold", mine_threshold, "matcher similarity threshold")
        ->check(CLI::Range(0.0, 1.0));
    mine_cmd->add_flag("--include-initial", include_initial,
                       "record pom files of root commits as initial inserts");
    bool committer_time = false;
    mine_cmd->add_flag("--committer-time", committer_time,
                       "timestamp records with committer time instead of author time");

    // stats
    CLI::App* stats = app.add_subcommand("stats", "Analyses over a ChangeDB");
    stats->require_subcommand(1);
    std::string freq_db;
    bool freq_json = false;
    CLI::App* freq = stats->add_subcommand("frequency", "Relative change-type frequencies");
    freq->add_option("db", freq_db, "ChangeDB file")->required();
    freq->add_flag("--json", freq_json, "JSON output");

    std::string prox_db, prox_releases, prox_k = "1,5,7,9", series_out;
    bool prox_json = false;
    CLI::App* prox =
        stats->add_subcommand("release-proximity", "Near-release change analysis");
    prox->add_option("db", prox_db, "ChangeDB file")->required();
    prox->add_option("--releases", prox_releases, "releases CSV")->required();
    prox->add_option("-k", prox_k, "comma-separated window sizes (default 1,5,7,9)");
    prox->add_flag("--json", prox_json, "JSON output");
    prox->add_option("--series-out", series_out, "write date,count,is_release CSV");
    bool one_sided = false, commit_days_only = false;
    prox->add_flag("--one-sided", one_sided,
                   "one-sided test (near-release counts greater)");
    prox->add_flag("--commit-days-only", commit_days_only,
                   "sample only days with at least one change");

    // releases
    CLI::App* releases = app.add_subcommand("releases", "Release metadata");
    releases->require_subcommand(1);
    std::string fetch_repo, fetch_out, api_base;
    CLI::App* fetch = releases->add_subcommand("fetch", "Fetch releases from the hosting API");
    fetch->add_option("repo", fetch_repo, "owner/name")->required();
    fetch->add_option("--out", fetch_out, "output CSV")->required();
    fetch->add_option("--api-base", api_base, "API base URL (default GitHub)");

    // evaluate
    std::string eval_extracted, eval_expected;
    bool eval_json = false;
    CLI::App* eval = app.add_subcommand("evaluate", "Precision/recall of a ChangeDB vs labels");
    eval->add_option("extracted", eval_extracted, "extracted ChangeDB")->required();
    eval->add_option("expected", eval_expected, "labeled ChangeDB")->required();
    eval->add_flag("--json", eval_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (diff->parsed())
            return cmd_diff(old_file, new_file, threshold, json, dump_script, fail_on_change);
        if (tax->parsed()) return cmd_taxonomy(tax_json);
        if (mine_cmd->parsed())
            return cmd_mine(repo, mine_out, mine_threshold, include_initial,
                            committer_time, verbosity);
        if (stats->parsed()) {
            if (freq->parsed()) return cmd_stats_frequency(freq_db, freq_json);
            if (prox->parsed())
                return cmd_stats_proximity(prox_db, prox_releases, prox_k, prox_json,
                                           series_out, one_sided, commit_days_only);
        }
        if (releases->parsed() && fetch->parsed())
            return cmd_releases_fetch(fetch_repo, fetch_out, api_base);
        if (eval->parsed()) return cmd_evaluate(eval_extracted, eval_expected, eval_json);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitUsage;
}
