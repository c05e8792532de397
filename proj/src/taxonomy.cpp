#include "builddiff/taxonomy.hpp"

#include <cstring>
#include <map>
#include <memory>
#include <unordered_map>

namespace builddiff {

namespace {

// One curated row of the Maven 4.0.0 schema table. `base` is the change-type
// name stem; rows without a stem are structural wrappers. `kinds` selects
// which of INSERT/DELETE/UPDATE exist for the element. Mandatory identifying
// children (groupId, artifactId, id) never get their own types: their updates
// surface as the parent's *_UPDATE when `identity` is set.
struct Row {
    const char* path;
    const char* base; // nullptr => transparent wrapper
    Category cat;
    const char* kinds;
    bool identity;
};

constexpr Category kGeneral = Category::General;
constexpr Category kTeam = Category::Team;
constexpr Category kDependency = Category::Dependency;
constexpr Category kBuild = Category::Build;
constexpr Category kRepository = Category::Repository;

const Row kRows[] = {
    // project metadata
    {"project", "PROJECT", kGeneral, "IDU", true},
    {"project/modelVersion", "MODEL_VERSION", kGeneral, "IDU", false},
    {"project/version", "PROJECT_VERSION", kGeneral, "IDU", false},
    {"project/packaging", "PACKAGING", kGeneral, "IDU", false},
    {"project/name", "PROJECT_NAME", kGeneral, "IDU", false},
    {"project/description", "PROJECT_DESCRIPTION", kGeneral, "IDU", false},
    {"project/url", "PROJECT_URL", kGeneral, "IDU", false},
    {"project/inceptionYear", "INCEPTION_YEAR", kGeneral, "IDU", false},
    {"project/organization", "ORGANIZATION", kGeneral, "ID", false},
    {"project/prerequisites", "PREREQUISITES", kGeneral, "ID", false},

    // parent
    {"project/parent", "PARENT", kGeneral, "IDU", true},
    {"project/parent/version", "PARENT_VERSION", kGeneral, "IDU", false},
    {"project/parent/relativePath", "PARENT_RELATIVE_PATH", kGeneral, "IDU", false},

    // modules and properties
    {"project/modules", nullptr, kGeneral, "", false},
    {"project/modules/module", "MODULE", kGeneral, "IDU", false},
    {"project/properties", nullptr, kGeneral, "", false},
    {"project/properties/*", "GENERAL_PROPERTY", kGeneral, "IDU", false},

    // scm / issue tracking / ci
    {"project/scm", "SCM", kGeneral, "ID", false},
    {"project/scm/connection", "SCM_CONNECTION", kGeneral, "IDU", false},
    {"project/scm/developerConnection", "SCM_DEVELOPER_CONNECTION", kGeneral, "IDU", false},
    {"project/scm/url", "SCM_URL", kGeneral, "IDU", false},
    {"project/scm/tag", "SCM_TAG", kGeneral, "IDU", false},
    {"project/issueManagement", "ISSUE_MANAGEMENT", kGeneral, "ID", false},
    {"project/ciManagement", "CI_MANAGEMENT", kGeneral, "ID", false},

    // licenses
    {"project/licenses", nullptr, kGeneral, "", false},
    {"project/licenses/license", "LICENSE", kGeneral, "ID", false},

    // team
    {"project/developers", nullptr, kTeam, "", false},
    {"project/developers/developer", "DEVELOPER", kTeam, "IDU", true},
    {"project/contributors", nullptr, kTeam, "", false},
    {"project/contributors/contributor", "CONTRIBUTOR", kTeam, "ID", false},
    {"project/mailingLists", nullptr, kTeam, "", false},
    {"project/mailingLists/mailingList", "MAILING_LIST", kTeam, "ID", false},

    // dependencies
    {"project/dependencies", nullptr, kDependency, "", false},
    {"project/dependencies/dependency", "DEPENDENCY", kDependency, "IDU", true},
    {"project/dependencies/dependency/version", "DEPENDENCY_VERSION", kDependency, "IDU", false},
    {"project/dependencies/dependency/scope", "DEPENDENCY_SCOPE", kDependency, "IDU", false},
    {"project/dependencies/dependency/type", "DEPENDENCY_TYPE", kDependency, "IDU", false},
    {"project/dependencies/dependency/classifier", "DEPENDENCY_CLASSIFIER", kDependency, "IDU", false},
    {"project/dependencies/dependency/optional", "DEPENDENCY_OPTIONAL", kDependency, "IDU", false},
    {"project/dependencies/dependency/exclusions", nullptr, kDependency, "", false},
    {"project/dependencies/dependency/exclusions/exclusion", "DEPENDENCY_EXCLUSION", kDependency, "IDU", true},

    // dependency management reuses the dependency child types below the
    // managed dependency itself
    {"project/dependencyManagement", nullptr, kDependency, "", false},
    {"project/dependencyManagement/dependencies", nullptr, kDependency, "", false},
    {"project/dependencyManagement/dependencies/dependency", "MANAGED_DEPENDENCY", kDependency, "IDU", true},
    {"project/dependencyManagement/dependencies/dependency/version", "MANAGED_DEPENDENCY_VERSION", kDependency, "IDU", false},
    {"project/dependencyManagement/dependencies/dependency/scope", "DEPENDENCY_SCOPE", kDependency, "IDU", false},
    {"project/dependencyManagement/dependencies/dependency/type", "DEPENDENCY_TYPE", kDependency, "IDU", false},
    {"project/dependencyManagement/dependencies/dependency/classifier", "DEPENDENCY_CLASSIFIER", kDependency, "IDU", false},
    {"project/dependencyManagement/dependencies/dependency/optional", "DEPENDENCY_OPTIONAL", kDependency, "IDU", false},
    {"project/dependencyManagement/dependencies/dependency/exclusions", nullptr, kDependency, "", false},
    {"project/dependencyManagement/dependencies/dependency/exclusions/exclusion", "DEPENDENCY_EXCLUSION", kDependency, "IDU", true},

    // build section
    {"project/build", "BUILD", kBuild, "ID", false},
    {"project/build/sourceDirectory", "SOURCE_DIRECTORY", kBuild, "IDU", false},
    {"project/build/testSourceDirectory", "TEST_SOURCE_DIRECTORY", kBuild, "IDU", false},
    {"project/build/finalName", "FINAL_NAME", kBuild, "IDU", false},
    {"project/build/extensions", nullptr, kBuild, "", false},
    {"project/build/extensions/extension", "EXTENSION", kBuild, "IDU", true},
    {"project/build/resources", nullptr, kBuild, "", false},
    {"project/build/resources/resource", "RESOURCE", kBuild, "ID", false},
    {"project/build/testResources", nullptr, kBuild, "", false},
    {"project/build/testResources/testResource", "TEST_RESOURCE", kBuild, "ID", false},

    // plugins
    {"project/build/plugins", nullptr, kBuild, "", false},
    {"project/build/plugins/plugin", "PLUGIN", kBuild, "IDU", true},
    {"project/build/plugins/plugin/version", "PLUGIN_VERSION", kBuild, "IDU", false},
    {"project/build/plugins/plugin/configuration", "PLUGIN_CONFIGURATION", kBuild, "IDU", false},
    {"project/build/plugins/plugin/dependencies", nullptr, kDependency, "", false},
    {"project/build/plugins/plugin/dependencies/dependency", "PLUGIN_DEPENDENCY", kDependency, "IDU", true},
    {"project/build/plugins/plugin/dependencies/dependency/version", "DEPENDENCY_VERSION", kDependency, "IDU", false},
    {"project/build/plugins/plugin/dependencies/dependency/scope", "DEPENDENCY_SCOPE", kDependency, "IDU", false},
    {"project/build/plugins/plugin/dependencies/dependency/exclusions", nullptr, kDependency, "", false},
    {"project/build/plugins/plugin/dependencies/dependency/exclusions/exclusion", "DEPENDENCY_EXCLUSION", kDependency, "IDU", true},
    {"project/build/plugins/plugin/executions", nullptr, kBuild, "", false},
    {"project/build/plugins/plugin/executions/execution", "PLUGIN_EXECUTION", kBuild, "IDU", true},
    {"project/build/plugins/plugin/executions/execution/phase", "PLUGIN_EXECUTION_PHASE", kBuild, "IDU", false},
    {"project/build/plugins/plugin/executions/execution/goals", nullptr, kBuild, "", false},
    {"project/build/plugins/plugin/executions/execution/goals/goal", "PLUGIN_EXECUTION_GOAL", kBuild, "IDU", false},
    {"project/build/plugins/plugin/executions/execution/configuration", "PLUGIN_CONFIGURATION", kBuild, "IDU", false},

    // plugin management mirrors the plugin subtree
    {"project/build/pluginManagement", nullptr, kBuild, "", false},
    {"project/build/pluginManagement/plugins", nullptr, kBuild, "", false},
    {"project/build/pluginManagement/plugins/plugin", "MANAGED_PLUGIN", kBuild, "IDU", true},
    {"project/build/pluginManagement/plugins/plugin/version", "MANAGED_PLUGIN_VERSION", kBuild, "IDU", false},
    {"project/build/pluginManagement/plugins/plugin/configuration", "PLUGIN_CONFIGURATION", kBuild, "IDU", false},
    {"project/build/pluginManagement/plugins/plugin/dependencies", nullptr, kDependency, "", false},
    {"project/build/pluginManagement/plugins/plugin/dependencies/dependency", "PLUGIN_DEPENDENCY", kDependency, "IDU", true},
    {"project/build/pluginManagement/plugins/plugin/executions", nullptr, kBuild, "", false},
    {"project/build/pluginManagement/plugins/plugin/executions/execution", "PLUGIN_EXECUTION", kBuild, "IDU", true},
    {"project/build/pluginManagement/plugins/plugin/executions/execution/phase", "PLUGIN_EXECUTION_PHASE", kBuild, "IDU", false},
    {"project/build/pluginManagement/plugins/plugin/executions/execution/goals", nullptr, kBuild, "", false},
    {"project/build/pluginManagement/plugins/plugin/executions/execution/goals/goal", "PLUGIN_EXECUTION_GOAL", kBuild, "IDU", false},
    {"project/build/pluginManagement/plugins/plugin/executions/execution/configuration", "PLUGIN_CONFIGURATION", kBuild, "IDU", false},

    // reporting (site/report plugins behave like build plugins)
    {"project/reporting", "REPORTING", kBuild, "ID", false},
    {"project/reporting/plugins", nullptr, kBuild, "", false},
    {"project/reporting/plugins/plugin", "PLUGIN", kBuild, "IDU", true},
    {"project/reporting/plugins/plugin/version", "PLUGIN_VERSION", kBuild, "IDU", false},
    {"project/reporting/plugins/plugin/configuration", "PLUGIN_CONFIGURATION", kBuild, "IDU", false},

    // profiles: the profile element itself plus its activation; everything
    // else under a profile resolves to the top-level rows
    {"project/profiles", nullptr, kGeneral, "", false},
    {"project/profiles/profile", "PROFILE", kGeneral, "IDU", true},
    {"project/profiles/profile/activation", "PROFILE_ACTIVATION", kGeneral, "ID", false},

    // repositories
    {"project/repositories", nullptr, kRepository, "", false},
    {"project/repositories/repository", "REPOSITORY", kRepository, "IDU", true},
    {"project/repositories/repository/url", "REPOSITORY_URL", kRepository, "IDU", false},
    {"project/pluginRepositories", nullptr, kRepository, "", false},
    {"project/pluginRepositories/pluginRepository", "PLUGIN_REPOSITORY", kRepository, "IDU", true},
    {"project/pluginRepositories/pluginRepository/url", "PLUGIN_REPOSITORY_URL", kRepository, "IDU", false},
    {"project/distributionManagement", "DIST_MANAGEMENT", kRepository, "ID", false},
    {"project/distributionManagement/repository", "DIST_REPOSITORY", kRepository, "IDU", true},
    {"project/distributionManagement/repository/url", "REPOSITORY_URL", kRepository, "IDU", false},
    {"project/distributionManagement/snapshotRepository", "DIST_SNAPSHOT_REPOSITORY", kRepository, "IDU", true},
    {"project/distributionManagement/snapshotRepository/url", "REPOSITORY_URL", kRepository, "IDU", false},
    {"project/distributionManagement/site", "DIST_SITE", kRepository, "ID", false},
};

const char* kKindSuffix[] = {"_INSERT", "_DELETE", "_UPDATE"};

struct Tables {
    std::vector<ChangeType> types;
    std::unordered_map<std::string, size_t> type_by_name;
    std::unordered_map<std::string, PathRule> rule_by_path;
    ChangeType unknown[3];
};

const Tables& tables() {
    static const Tables t = [] {
        Tables tb;
        // Two passes so that pointers into `types` stay valid.
        for (const Row& row : kRows) {
            if (row.base == nullptr) continue;
            for (ChangeKind k : {ChangeKind::Insert, ChangeKind::Delete, ChangeKind::Update}) {
                char kc = "IDU"[static_cast<int>(k)];
                if (std::strchr(row.kinds, kc) == nullptr) continue;
                std::string name = std::string(row.base) + kKindSuffix[static_cast<int>(k)];
                if (tb.type_by_name.count(name)) continue; // shared across paths
                tb.type_by_name.emplace(name, tb.types.size());
                tb.types.push_back(ChangeType{name, row.path, k, row.cat});
            }
        }
        for (const Row& row : kRows) {
            PathRule rule;
            rule.transparent = row.base == nullptr;
            rule.identity_update = row.identity;
            if (row.base != nullptr) {
                for (ChangeKind k : {ChangeKind::Insert, ChangeKind::Delete, ChangeKind::Update}) {
                    char kc = "IDU"[static_cast<int>(k)];
                    if (std::strchr(row.kinds, kc) == nullptr) continue;
                    std::string name = std::string(row.base) + kKindSuffix[static_cast<int>(k)];
                    const ChangeType* ct = &tb.types[tb.type_by_name.at(name)];
                    if (k == ChangeKind::Insert) rule.insert = ct;
                    if (k == ChangeKind::Delete) rule.remove = ct;
                    if (k == ChangeKind::Update) rule.update = ct;
                }
            }
            tb.rule_by_path.emplace(row.path, rule);
        }
        for (ChangeKind k : {ChangeKind::Insert, ChangeKind::Delete, ChangeKind::Update}) {
            int i = static_cast<int>(k);
            tb.unknown[i] = ChangeType{std::string("UNKNOWN") + kKindSuffix[i], "*", k,
                                       Category::General};
        }
        return tb;
    }();
    return t;
}

// Removes interior profiles/profile segment pairs so profile content resolves
// against the top-level rows. The profile element itself (path ending in the
// pair) is left alone.
std::string strip_profiles(const std::string& path) {
    std::string out = path;
    for (;;) {
        auto pos = out.find("/profiles/profile/");
        if (pos == std::string::npos) return out;
        out.erase(pos, std::strlen("/profiles/profile"));
    }
}

} // namespace

std::string category_name(Category c) {
    switch (c) {
        case Category::Dependency: return "Dependency Changes";
        case Category::Build: return "Build Changes";
        case Category::Team: return "Team Changes";
        case Category::Repository: return "Repository Changes";
        case Category::General: return "General Changes";
    }
    return "?";
}

Category parse_category(const std::string& name) {
    for (Category c : {Category::Dependency, Category::Build, Category::Team,
                       Category::Repository, Category::General})
        if (category_name(c) == name) return c;
    throw Error("unknown change category: " + name);
}

std::string kind_name(ChangeKind k) {
    switch (k) {
        case ChangeKind::Insert: return "INSERT";
        case ChangeKind::Delete: return "DELETE";
        case ChangeKind::Update: return "UPDATE";
    }
    return "?";
}

const std::vector<ChangeType>& taxonomy() {
    return tables().types;
}

std::vector<ChangeType> build_taxonomy() {
    return tables().types;
}

const ChangeType* find_change_type(const std::string& name) {
    const auto& tb = tables();
    auto it = tb.type_by_name.find(name);
    return it == tb.type_by_name.end() ? nullptr : &tb.types[it->second];
}

const PathRule* find_rule(const std::string& node_path) {
    const auto& tb = tables();
    auto lookup = [&tb](const std::string& path) -> const PathRule* {
        auto it = tb.rule_by_path.find(path);
        if (it != tb.rule_by_path.end()) return &it->second;
        // wildcard leaves (currently only project/properties/*)
        auto slash = path.rfind('/');
        if (slash != std::string::npos) {
            it = tb.rule_by_path.find(path.substr(0, slash) + "/*");
            if (it != tb.rule_by_path.end()) return &it->second;
        }
        return nullptr;
    };
    // Profile-specific rows (the profile element, its activation) match the
    // literal path; everything else falls back to the top-level rows.
    if (const PathRule* rule = lookup(node_path)) return rule;
    std::string stripped = strip_profiles(node_path);
    if (stripped != node_path) return lookup(stripped);
    return nullptr;
}

const ChangeType& unknown_type(ChangeKind kind) {
    return tables().unknown[static_cast<int>(kind)];
}

bool is_unknown_type_name(const std::string& name) {
    return name.rfind("UNKNOWN_", 0) == 0;
}

} // namespace builddiff
