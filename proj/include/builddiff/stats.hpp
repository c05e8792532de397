#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "builddiff/changedb.hpp"

namespace builddiff {

// Calendar days as days since 1970-01-01 (UTC).
using DayNumber = std::int64_t;

DayNumber day_from_timestamp(std::int64_t utc_seconds);
DayNumber day_from_ymd(int year, int month, int day);
std::string day_to_iso(DayNumber day);
DayNumber day_from_iso(const std::string& text); // throws Error on bad input

/// Relative change-type and category frequencies over a ChangeDB.
struct FrequencyReport {
    std::map<std::string, size_t> type_counts;
    std::map<std::string, double> per_type;
    std::map<std::string, double> per_category; // keyed by category name
    size_t total_changes = 0;

    /// Types sorted by frequency (descending, ties by name).
    std::vector<std::pair<std::string, double>> ranked_types() const;
    /// Cumulative share of the n most frequent types.
    double top_share(size_t n) const;
};

FrequencyReport frequency_report(const std::vector<ChangeRecord>& db);

struct ReleaseEvent {
    DayNumber date = 0;
    std::string tag;
    std::string commit; // may be empty

    bool operator==(const ReleaseEvent&) const = default;
};

// CSV with header date,tag,commit and ISO-8601 dates; rows sorted ascending.
std::vector<ReleaseEvent> read_releases_csv(std::istream& in);
std::vector<ReleaseEvent> read_releases_csv_file(const std::string& path);
void write_releases_csv(std::ostream& out, std::vector<ReleaseEvent> releases);

/// Per-day change counts over the full span of a ChangeDB, zero-filled.
/// window > 1 means each entry is the sum of the raw counts over the
/// window-day range ending at that day.
struct DailySeries {
    DayNumber first_day = 0;
    int window = 1;
    std::vector<long> counts;

    size_t size() const { return counts.size(); }
    DayNumber day_at(size_t i) const { return first_day + static_cast<DayNumber>(i); }
};

DailySeries daily_series(const std::vector<ChangeRecord>& db, int k);

/// Day D is near a release at R when R - k < D <= R.
struct Partition {
    std::vector<double> near;
    std::vector<double> far;
    bool no_releases = false;
};

Partition near_release_partition(const DailySeries& series,
                                 const std::vector<ReleaseEvent>& releases, int k);

enum class TestSide {
    TwoSided, // default; the paper does not state sidedness
    Greater,  // one-sided: first sample stochastically larger
};

/// Mann-Whitney-Wilcoxon p-value: exact permutation distribution for
/// |x|+|y| <= 12, tie-corrected normal approximation with continuity
/// correction otherwise. Identical constant samples give p = 1.
double mann_whitney(const std::vector<double>& x, const std::vector<double>& y,
                    TestSide side = TestSide::TwoSided);
double mann_whitney_exact(const std::vector<double>& x, const std::vector<double>& y,
                          TestSide side = TestSide::TwoSided);
double mann_whitney_normal(const std::vector<double>& x, const std::vector<double>& y,
                           TestSide side = TestSide::TwoSided);

enum class EffectMagnitude { Negligible, Small, Medium, Large };

std::string magnitude_name(EffectMagnitude m);
EffectMagnitude magnitude_of(double delta); // thresholds 0.147 / 0.33 / 0.47 on |delta|

struct CliffsDeltaResult {
    double delta = 0.0;
    EffectMagnitude magnitude = EffectMagnitude::Negligible;
};

CliffsDeltaResult cliffs_delta(const std::vector<double>& x, const std::vector<double>& y);

struct TestResult {
    double p_value = 1.0;
    double delta = 0.0;
    EffectMagnitude magnitude = EffectMagnitude::Negligible;
    size_t n_near = 0;
    size_t n_far = 0;
};

struct ProximityRow {
    int k = 1;
    bool no_releases = false; // the release list was empty
    bool degenerate = false;  // one sample ended up empty, nothing to test
    TestResult result;

    bool computed() const { return !no_releases && !degenerate; }
};

struct ProximityReport {
    std::vector<ProximityRow> rows;
    DailySeries raw; // single-day series, for the time-series export
};

struct ProximityOptions {
    TestSide side = TestSide::TwoSided;
    // Restrict both samples to days that saw at least one change, instead of
    // all calendar days in the span.
    bool commit_days_only = false;
};

/// Near-release analysis for each window size in ks (default {1,5,7,9}).
ProximityReport release_proximity_report(const std::vector<ChangeRecord>& db,
                                         const std::vector<ReleaseEvent>& releases,
                                         const std::vector<int>& ks = {1, 5, 7, 9},
                                         const ProximityOptions& options = {});

/// Plot-ready export: date,count,is_release per day of the raw series.
void write_series_csv(std::ostream& out, const DailySeries& raw,
                      const std::vector<ReleaseEvent>& releases);

} // namespace builddiff
