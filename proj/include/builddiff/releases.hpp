#pragma once

#include <string>
#include <vector>

#include "builddiff/stats.hpp"

namespace builddiff {

struct FetchOptions {
    std::string api_base = "https://api.github.com";
    std::string token;  // empty = anonymous
    int per_page = 100; // page size used while paginating
};

/// Fetches the published releases of owner/name from the hosting service's
/// releases endpoint, following pagination, and returns them sorted by date.
/// Draft releases without a published date are skipped.
///
/// Throws NotFound, RateLimited or HttpError.
std::vector<ReleaseEvent> fetch_releases(const std::string& owner_repo,
                                         const FetchOptions& options = {});

} // namespace builddiff
