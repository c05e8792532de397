#pragma once

#include <string>

#include "builddiff/taxonomy.hpp"

namespace testutil {

/// Synthetic pom pair that exhibits exactly one instance of a change type.
struct TypeFixture {
    std::string old_xml;
    std::string new_xml;
    bool file_added = false;   // pair is (nothing, new_xml)
    bool file_removed = false; // pair is (old_xml, nothing)
};

/// Builds the fixture pair for a taxonomy entry. Covers every generated type;
/// throws builddiff::Error for types it cannot construct.
TypeFixture fixture_for(const builddiff::ChangeType& type);

} // namespace testutil
