#include "doctest.h"

#include <set>

#include "builddiff/classify.hpp"
#include "builddiff/taxonomy.hpp"
#include "support/typegen.hpp"

using namespace builddiff;

TEST_CASE("taxonomy size and uniqueness") {
    const auto& types = taxonomy();
    CHECK(types.size() >= 90);
    std::set<std::string> names;
    for (const auto& t : types) CHECK(names.insert(t.name).second);
}

TEST_CASE("core change types exist with their documented category") {
    auto expect = [](const char* name, Category cat) {
        const ChangeType* t = find_change_type(name);
        REQUIRE_MESSAGE(t != nullptr, name);
        CHECK(t->category == cat);
    };
    expect("PARENT_VERSION_UPDATE", Category::General);
    expect("PROJECT_VERSION_UPDATE", Category::General);
    expect("MODULE_INSERT", Category::General);
    expect("GENERAL_PROPERTY_INSERT", Category::General);
    expect("GENERAL_PROPERTY_UPDATE", Category::General);
    expect("GENERAL_PROPERTY_DELETE", Category::General);
    expect("DEPENDENCY_INSERT", Category::Dependency);
    expect("DEPENDENCY_DELETE", Category::Dependency);
    expect("DEPENDENCY_UPDATE", Category::Dependency);
    expect("DEPENDENCY_VERSION_UPDATE", Category::Dependency);
    expect("MANAGED_DEPENDENCY_DELETE", Category::Dependency);
    expect("PLUGIN_INSERT", Category::Build);
    expect("PLUGIN_UPDATE", Category::Build);
    expect("PLUGIN_CONFIGURATION_UPDATE", Category::Build);
    expect("TEST_RESOURCE_DELETE", Category::Build);
    expect("DEVELOPER_INSERT", Category::Team);
    expect("CONTRIBUTOR_DELETE", Category::Team);
    expect("PLUGIN_REPOSITORY_INSERT", Category::Repository);
    expect("DIST_SNAPSHOT_REPOSITORY_UPDATE", Category::Repository);
    expect("REPOSITORY_DELETE", Category::Repository);
}

TEST_CASE("type kinds match their name suffix") {
    for (const auto& t : taxonomy()) {
        std::string suffix = "_" + kind_name(t.kind);
        REQUIRE(t.name.size() > suffix.size());
        CHECK(t.name.substr(t.name.size() - suffix.size()) == suffix);
    }
}

TEST_CASE("mandatory identifying children never get insert/delete types") {
    CHECK(find_change_type("GROUP_ID_INSERT") == nullptr);
    CHECK(find_change_type("ARTIFACT_ID_INSERT") == nullptr);
    CHECK(find_rule("project/dependencies/dependency/groupId") == nullptr);
    CHECK(find_rule("project/dependencies/dependency/artifactId") == nullptr);
}

TEST_CASE("exactly five categories, every type in one") {
    std::set<std::string> seen;
    for (const auto& t : taxonomy()) seen.insert(category_name(t.category));
    CHECK(seen == std::set<std::string>{"Build Changes", "Dependency Changes",
                                        "General Changes", "Repository Changes",
                                        "Team Changes"});
    for (const auto& name : seen) CHECK(category_name(parse_category(name)) == name);
}

TEST_CASE("path rules resolve the taxonomy") {
    const PathRule* dep = find_rule("project/dependencies/dependency");
    REQUIRE(dep != nullptr);
    CHECK(dep->insert->name == "DEPENDENCY_INSERT");
    CHECK(dep->remove->name == "DEPENDENCY_DELETE");
    CHECK(dep->update->name == "DEPENDENCY_UPDATE");
    CHECK(dep->identity_update);

    const PathRule* wrappers = find_rule("project/dependencies");
    REQUIRE(wrappers != nullptr);
    CHECK(wrappers->transparent);

    CHECK(find_rule("project/unknownStuff") == nullptr);
}

TEST_CASE("profile content resolves to the top-level rows") {
    const PathRule* dep = find_rule("project/profiles/profile/dependencies/dependency");
    REQUIRE(dep != nullptr);
    CHECK(dep->insert->name == "DEPENDENCY_INSERT");

    const PathRule* plugin =
        find_rule("project/profiles/profile/build/plugins/plugin/version");
    REQUIRE(plugin != nullptr);
    CHECK(plugin->update->name == "PLUGIN_VERSION_UPDATE");

    const PathRule* profile = find_rule("project/profiles/profile");
    REQUIRE(profile != nullptr);
    CHECK(profile->insert->name == "PROFILE_INSERT");

    const PathRule* activation = find_rule("project/profiles/profile/activation");
    REQUIRE(activation != nullptr);
    CHECK(activation->insert->name == "PROFILE_ACTIVATION_INSERT");
}

TEST_CASE("property names match through the wildcard row") {
    const PathRule* prop = find_rule("project/properties/spring.version");
    REQUIRE(prop != nullptr);
    CHECK(prop->update->name == "GENERAL_PROPERTY_UPDATE");
    const PathRule* profile_prop =
        find_rule("project/profiles/profile/properties/anything.at.all");
    REQUIRE(profile_prop != nullptr);
    CHECK(profile_prop->insert->name == "GENERAL_PROPERTY_INSERT");
}

TEST_CASE("build_taxonomy is deterministic") {
    auto a = build_taxonomy();
    auto b = build_taxonomy();
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK(a[i].element_path == b[i].element_path);
    }
}

TEST_CASE("unknown types are reserved, not part of the taxonomy") {
    CHECK(unknown_type(ChangeKind::Insert).name == "UNKNOWN_INSERT");
    CHECK(unknown_type(ChangeKind::Delete).name == "UNKNOWN_DELETE");
    CHECK(unknown_type(ChangeKind::Update).name == "UNKNOWN_UPDATE");
    CHECK(find_change_type("UNKNOWN_INSERT") == nullptr);
    CHECK(is_unknown_type_name("UNKNOWN_DELETE"));
    CHECK_FALSE(is_unknown_type_name("DEPENDENCY_INSERT"));
}

TEST_CASE("every taxonomy type is detectable from a synthetic pom pair") {
    for (const ChangeType& type : taxonomy()) {
        INFO(type.name);
        testutil::TypeFixture fx = testutil::fixture_for(type);
        std::vector<BuildChange> changes;
        if (fx.file_added)
            changes = classify_added_tree(normalize(parse_pom(fx.new_xml)));
        else if (fx.file_removed)
            changes = classify_removed_tree(normalize(parse_pom(fx.old_xml)));
        else
            changes = diff_documents(fx.old_xml, fx.new_xml);
        REQUIRE(changes.size() == 1);
        CHECK(changes[0].change_type == type.name);
        CHECK(changes[0].category == type.category);
    }
}
