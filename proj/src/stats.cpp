#include "builddiff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace builddiff {

namespace {

// Civil-date conversions after Howard Hinnant's algorithms; valid across the
// proleptic Gregorian calendar.
DayNumber days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<DayNumber>(era) * 146097 + static_cast<DayNumber>(doe) - 719468;
}

void civil_from_days(DayNumber z, int& y, int& m, int& d) {
    z += 719468;
    const DayNumber era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int yy = static_cast<int>(yoe) + static_cast<int>(era) * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = yy + (m <= 2);
}

double binomial(const std::vector<std::vector<double>>& pascal, size_t n, size_t k) {
    return pascal[n][k];
}

std::vector<std::vector<double>> pascal_triangle(size_t n) {
    std::vector<std::vector<double>> c(n + 1);
    for (size_t i = 0; i <= n; ++i) {
        c[i].assign(i + 1, 1.0);
        for (size_t j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
    }
    return c;
}

// Doubled U statistic of x against y (ties count one, not one half), so the
// statistic stays an exact integer.
long long doubled_u(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> sy = y;
    std::sort(sy.begin(), sy.end());
    long long u2 = 0;
    for (double v : x) {
        auto lo = std::lower_bound(sy.begin(), sy.end(), v);
        auto hi = std::upper_bound(sy.begin(), sy.end(), v);
        u2 += 2 * static_cast<long long>(lo - sy.begin());
        u2 += static_cast<long long>(hi - lo);
    }
    return u2;
}

bool all_equal(const std::vector<double>& x, const std::vector<double>& y) {
    double v = x.empty() ? y[0] : x[0];
    for (double a : x)
        if (a != v) return false;
    for (double b : y)
        if (b != v) return false;
    return true;
}

void check_samples(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty() || y.empty())
        throw Error("mann_whitney/cliffs_delta need non-empty samples");
}

} // namespace

DayNumber day_from_timestamp(std::int64_t utc_seconds) {
    // floor division; timestamps are positive in practice but keep it exact
    DayNumber d = utc_seconds / 86400;
    if (utc_seconds % 86400 < 0) --d;
    return d;
}

DayNumber day_from_ymd(int year, int month, int day) {
    return days_from_civil(year, month, day);
}

std::string day_to_iso(DayNumber day) {
    int y, m, d;
    civil_from_days(day, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

DayNumber day_from_iso(const std::string& text) {
    int y, m, d;
    if (std::sscanf(text.c_str(), "%d-%d-%d", &y, &m, &d) != 3 || m < 1 || m > 12 ||
        d < 1 || d > 31)
        throw Error("bad ISO date: " + text);
    return days_from_civil(y, m, d);
}

std::vector<std::pair<std::string, double>> FrequencyReport::ranked_types() const {
    std::vector<std::pair<std::string, double>> ranked(per_type.begin(), per_type.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return ranked;
}

double FrequencyReport::top_share(size_t n) const {
    auto ranked = ranked_types();
    double share = 0.0;
    for (size_t i = 0; i < ranked.size() && i < n; ++i) share += ranked[i].second;
    return share;
}

FrequencyReport frequency_report(const std::vector<ChangeRecord>& db) {
    FrequencyReport rep;
    rep.total_changes = db.size();
    if (db.empty()) return rep;

    std::map<std::string, size_t> category_counts;
    for (const auto& r : db) {
        ++rep.type_counts[r.change.change_type];
        ++category_counts[category_name(r.change.category)];
    }
    double total = static_cast<double>(rep.total_changes);
    for (const auto& [name, count] : rep.type_counts)
        rep.per_type[name] = static_cast<double>(count) / total;
    for (const auto& [name, count] : category_counts)
        rep.per_category[name] = static_cast<double>(count) / total;
    return rep;
}

std::vector<ReleaseEvent> read_releases_csv(std::istream& in) {
    std::vector<ReleaseEvent> releases;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("date", 0) == 0) continue; // header
        }
        auto c1 = line.find(',');
        auto c2 = line.rfind(',');
        if (c1 == std::string::npos || c2 == c1)
            throw Error("bad releases CSV row: " + line);
        ReleaseEvent ev;
        ev.date = day_from_iso(line.substr(0, c1));
        ev.tag = line.substr(c1 + 1, c2 - c1 - 1);
        ev.commit = line.substr(c2 + 1);
        releases.push_back(std::move(ev));
    }
    std::stable_sort(releases.begin(), releases.end(),
                     [](const ReleaseEvent& a, const ReleaseEvent& b) { return a.date < b.date; });
    return releases;
}

std::vector<ReleaseEvent> read_releases_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open releases CSV: " + path);
    return read_releases_csv(in);
}

void write_releases_csv(std::ostream& out, std::vector<ReleaseEvent> releases) {
    std::stable_sort(releases.begin(), releases.end(),
                     [](const ReleaseEvent& a, const ReleaseEvent& b) { return a.date < b.date; });
    out << "date,tag,commit\n";
    for (const auto& r : releases)
        out << day_to_iso(r.date) << ',' << r.tag << ',' << r.commit << '\n';
}

DailySeries daily_series(const std::vector<ChangeRecord>& db, int k) {
    if (k < 1) throw Error("window size k must be >= 1");
    DailySeries s;
    s.window = k;
    if (db.empty()) return s;

    DayNumber lo = day_from_timestamp(db.front().timestamp);
    DayNumber hi = lo;
    for (const auto& r : db) {
        DayNumber d = day_from_timestamp(r.timestamp);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    s.first_day = lo;
    std::vector<long> raw(static_cast<size_t>(hi - lo + 1), 0);
    for (const auto& r : db) ++raw[static_cast<size_t>(day_from_timestamp(r.timestamp) - lo)];

    if (k == 1) {
        s.counts = std::move(raw);
        return s;
    }
    // sliding sum of the k days ending at each day (truncated at the start)
    s.counts.resize(raw.size());
    long acc = 0;
    for (size_t i = 0; i < raw.size(); ++i) {
        acc += raw[i];
        if (i >= static_cast<size_t>(k)) acc -= raw[i - static_cast<size_t>(k)];
        s.counts[i] = acc;
    }
    return s;
}

Partition near_release_partition(const DailySeries& series,
                                 const std::vector<ReleaseEvent>& releases, int k) {
    if (k < 1) throw Error("window size k must be >= 1");
    Partition p;
    if (releases.empty()) {
        p.no_releases = true;
        p.far.assign(series.counts.begin(), series.counts.end());
        return p;
    }
    std::vector<DayNumber> days;
    days.reserve(releases.size());
    for (const auto& r : releases) days.push_back(r.date);
    std::sort(days.begin(), days.end());

    for (size_t i = 0; i < series.size(); ++i) {
        DayNumber d = series.day_at(i);
        // near iff some release R satisfies R - k < d <= R
        auto it = std::lower_bound(days.begin(), days.end(), d);
        bool near = it != days.end() && *it - k < d;
        (near ? p.near : p.far).push_back(static_cast<double>(series.counts[i]));
    }
    return p;
}

double mann_whitney_exact(const std::vector<double>& x, const std::vector<double>& y,
                          TestSide side) {
    check_samples(x, y);
    if (all_equal(x, y)) return 1.0;

    const size_t n1 = x.size(), n2 = y.size(), n = n1 + n2;
    long long u2_obs = doubled_u(x, y);
    long long center2 = static_cast<long long>(n1) * static_cast<long long>(n2);
    long long dev = std::llabs(u2_obs - center2);

    // tie-group sizes of the pooled multiset
    std::vector<double> pooled;
    pooled.reserve(n);
    pooled.insert(pooled.end(), x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    std::sort(pooled.begin(), pooled.end());
    std::vector<size_t> groups;
    for (size_t i = 0; i < n;) {
        size_t j = i;
        while (j < n && pooled[j] == pooled[i]) ++j;
        groups.push_back(j - i);
        i = j;
    }

    // Distribution of the doubled U statistic over all C(n, n1) assignments
    // of pooled values to the first sample, by dynamic programming over tie
    // groups. dp[a][u] = number of ways to put `a` values into x with doubled
    // statistic u.
    const size_t u_max = 2 * n1 * n2;
    auto pascal = pascal_triangle(n);
    std::vector<std::vector<double>> dp(n1 + 1, std::vector<double>(u_max + 1, 0.0));
    dp[0][0] = 1.0;
    size_t seen = 0;
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        size_t s = groups[gi];
        std::vector<std::vector<double>> next(n1 + 1, std::vector<double>(u_max + 1, 0.0));
        for (size_t a = 0; a <= std::min(n1, seen); ++a) {
            if (seen - a > n2) continue; // more y used than exist
            for (size_t u = 0; u <= u_max; ++u) {
                double ways = dp[a][u];
                if (ways == 0.0) continue;
                size_t y_before = seen - a;
                // keep the y side within n2, or the state cannot complete
                size_t lo = seen + s > a + n2 ? seen + s - a - n2 : 0;
                for (size_t take = lo; take <= s && a + take <= n1; ++take) {
                    // x values of this group beat every earlier y value and
                    // tie with the group's remaining y values
                    size_t du = 2 * take * y_before + take * (s - take);
                    next[a + take][u + du] += ways * binomial(pascal, s, take);
                }
            }
        }
        dp = std::move(next);
        seen += s;
    }

    double total = 0.0, extreme = 0.0;
    for (size_t u = 0; u <= u_max; ++u) {
        double ways = dp[n1][u];
        if (ways == 0.0) continue;
        total += ways;
        bool counts = side == TestSide::TwoSided
                          ? std::llabs(static_cast<long long>(u) - center2) >= dev
                          : static_cast<long long>(u) >= u2_obs;
        if (counts) extreme += ways;
    }
    return extreme / total;
}

double mann_whitney_normal(const std::vector<double>& x, const std::vector<double>& y,
                           TestSide side) {
    check_samples(x, y);
    if (all_equal(x, y)) return 1.0;

    const double n1 = static_cast<double>(x.size());
    const double n2 = static_cast<double>(y.size());
    const double n = n1 + n2;

    double u1 = static_cast<double>(doubled_u(x, y)) / 2.0;
    double mu = n1 * n2 / 2.0;

    // midrank tie correction
    std::vector<double> pooled;
    pooled.insert(pooled.end(), x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    std::sort(pooled.begin(), pooled.end());
    double tie_sum = 0.0;
    for (size_t i = 0; i < pooled.size();) {
        size_t j = i;
        while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
        double t = static_cast<double>(j - i);
        tie_sum += t * t * t - t;
        i = j;
    }
    double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0)));
    if (var <= 0.0) return 1.0;

    if (side == TestSide::Greater) {
        double z = (u1 - mu - 0.5) / std::sqrt(var); // continuity correction
        return 0.5 * std::erfc(z / std::sqrt(2.0));
    }
    double z = (std::fabs(u1 - mu) - 0.5) / std::sqrt(var);
    if (z < 0.0) z = 0.0;
    return std::erfc(z / std::sqrt(2.0));
}

double mann_whitney(const std::vector<double>& x, const std::vector<double>& y,
                    TestSide side) {
    check_samples(x, y);
    if (x.size() + y.size() <= 12) return mann_whitney_exact(x, y, side);
    return mann_whitney_normal(x, y, side);
}

std::string magnitude_name(EffectMagnitude m) {
    switch (m) {
        case EffectMagnitude::Negligible: return "negligible";
        case EffectMagnitude::Small: return "small";
        case EffectMagnitude::Medium: return "medium";
        case EffectMagnitude::Large: return "large";
    }
    return "?";
}

EffectMagnitude magnitude_of(double delta) {
    double d = std::fabs(delta);
    if (d < 0.147) return EffectMagnitude::Negligible;
    if (d < 0.33) return EffectMagnitude::Small;
    if (d < 0.47) return EffectMagnitude::Medium;
    return EffectMagnitude::Large;
}

CliffsDeltaResult cliffs_delta(const std::vector<double>& x, const std::vector<double>& y) {
    check_samples(x, y);
    std::vector<double> sy = y;
    std::sort(sy.begin(), sy.end());
    long long greater = 0, less = 0;
    for (double v : x) {
        auto lo = std::lower_bound(sy.begin(), sy.end(), v);
        auto hi = std::upper_bound(sy.begin(), sy.end(), v);
        greater += lo - sy.begin();
        less += sy.end() - hi;
    }
    double delta = static_cast<double>(greater - less) /
                   (static_cast<double>(x.size()) * static_cast<double>(y.size()));
    return {delta, magnitude_of(delta)};
}

namespace {

// Drops the days that saw no change at all from a partitioned series.
Partition filter_commit_days(const DailySeries& series, const DailySeries& raw,
                             const std::vector<ReleaseEvent>& releases, int k) {
    Partition filtered;
    std::vector<DayNumber> days;
    for (const auto& r : releases) days.push_back(r.date);
    std::sort(days.begin(), days.end());
    filtered.no_releases = releases.empty();
    for (size_t i = 0; i < series.size(); ++i) {
        if (raw.counts[i] == 0) continue;
        DayNumber d = series.day_at(i);
        auto it = std::lower_bound(days.begin(), days.end(), d);
        bool near = !releases.empty() && it != days.end() && *it - k < d;
        (near ? filtered.near : filtered.far)
            .push_back(static_cast<double>(series.counts[i]));
    }
    return filtered;
}

} // namespace

ProximityReport release_proximity_report(const std::vector<ChangeRecord>& db,
                                         const std::vector<ReleaseEvent>& releases,
                                         const std::vector<int>& ks,
                                         const ProximityOptions& options) {
    if (ks.empty()) throw Error("release_proximity_report: ks must be non-empty");
    ProximityReport rep;
    rep.raw = daily_series(db, 1);
    for (int k : ks) {
        ProximityRow row;
        row.k = k;
        DailySeries series = daily_series(db, k);
        Partition part = options.commit_days_only
                             ? filter_commit_days(series, rep.raw, releases, k)
                             : near_release_partition(series, releases, k);
        row.result.n_near = part.near.size();
        row.result.n_far = part.far.size();
        if (part.no_releases) {
            row.no_releases = true;
        } else if (part.near.empty() || part.far.empty()) {
            row.degenerate = true;
        } else {
            row.result.p_value = mann_whitney(part.near, part.far, options.side);
            CliffsDeltaResult cd = cliffs_delta(part.near, part.far);
            row.result.delta = cd.delta;
            row.result.magnitude = cd.magnitude;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

void write_series_csv(std::ostream& out, const DailySeries& raw,
                      const std::vector<ReleaseEvent>& releases) {
    std::vector<DayNumber> days;
    for (const auto& r : releases) days.push_back(r.date);
    std::sort(days.begin(), days.end());
    out << "date,count,is_release\n";
    for (size_t i = 0; i < raw.size(); ++i) {
        DayNumber d = raw.day_at(i);
        bool rel = std::binary_search(days.begin(), days.end(), d);
        out << day_to_iso(d) << ',' << raw.counts[i] << ',' << (rel ? 1 : 0) << '\n';
    }
}

} // namespace builddiff
