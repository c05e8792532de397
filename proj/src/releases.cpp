#include "builddiff/releases.hpp"

#include <algorithm>
#include <cctype>

#include "httplib.h" // CPPHTTPLIB_OPENSSL_SUPPORT comes from the build
#include "json.hpp"

namespace builddiff {

namespace {

bool looks_like_sha(const std::string& s) {
    if (s.size() != 40) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isxdigit(c) != 0; });
}

} // namespace

std::vector<ReleaseEvent> fetch_releases(const std::string& owner_repo,
                                         const FetchOptions& options) {
    httplib::Client client(options.api_base);
    client.set_follow_location(true);
    httplib::Headers headers = {
        {"User-Agent", "builddiff"},
        {"Accept", "application/vnd.github+json"},
    };
    if (!options.token.empty())
        headers.emplace("Authorization", "Bearer " + options.token);

    std::vector<ReleaseEvent> releases;
    for (int page = 1;; ++page) {
        std::string path = "/repos/" + owner_repo +
                           "/releases?per_page=" + std::to_string(options.per_page) +
                           "&page=" + std::to_string(page);
        httplib::Result res = client.Get(path, headers);
        if (!res)
            throw HttpError("connection to " + options.api_base + " failed: " +
                            httplib::to_string(res.error()));
        if (res->status == 404)
            throw NotFound("repository not found: " + owner_repo);
        if (res->status == 403 || res->status == 429) {
            long retry_after = -1;
            if (res->has_header("Retry-After"))
                retry_after = std::stol(res->get_header_value("Retry-After"));
            throw RateLimited("rate limited by " + options.api_base, retry_after);
        }
        if (res->status != 200)
            throw HttpError("unexpected HTTP status " + std::to_string(res->status) +
                            " for " + path);

        nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
        if (body.is_discarded() || !body.is_array())
            throw HttpError("malformed releases payload for " + path);
        for (const auto& item : body) {
            if (!item.contains("published_at") || item["published_at"].is_null())
                continue; // draft
            std::string published = item["published_at"].get<std::string>();
            if (published.size() < 10) continue;
            ReleaseEvent ev;
            ev.date = day_from_iso(published.substr(0, 10));
            ev.tag = item.value("tag_name", "");
            std::string target = item.value("target_commitish", "");
            if (looks_like_sha(target)) ev.commit = target;
            releases.push_back(std::move(ev));
        }
        if (body.size() < static_cast<size_t>(options.per_page)) break;
    }

    std::stable_sort(releases.begin(), releases.end(),
                     [](const ReleaseEvent& a, const ReleaseEvent& b) { return a.date < b.date; });
    return releases;
}

} // namespace builddiff
