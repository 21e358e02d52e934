#pragma once

#include "covidfc/series.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace covidfc {

/// Study window used by default at ingestion: 2020-03-12 .. 2022-02-15.
inline constexpr DateRange kStudyWindow{make_date(2020, 3, 12), make_date(2022, 2, 16)};

struct IngestOptions {
    std::optional<DateRange> window = kStudyWindow;
};

struct IngestReport {
    std::size_t regions = 0;
    std::size_t rows = 0;
    std::size_t clamped_negative = 0;  // negative dailies set to 0
    std::size_t filled_missing = 0;    // absent days inserted as 0
    std::size_t dropped_outside = 0;   // days outside the window
    std::optional<Date> first_date;
    std::optional<Date> last_date;
};

struct Dataset {
    std::vector<RegionSeries> regions;  // sorted by region_id
    IngestReport report;
};

/// Reads `region_id,country,population,date,confirmed_daily`. Errors name
/// the offending line.
Dataset read_canonical_csv(std::istream& in, const IngestOptions& options = {});
Dataset read_canonical_csv(const std::string& path, const IngestOptions& options = {});

/// Writes rows sorted by region then date; numbers use the shortest
/// representation that round-trips.
void write_canonical_csv(std::ostream& out, const std::vector<RegionSeries>& regions);
void write_canonical_csv(const std::string& path, const std::vector<RegionSeries>& regions);

struct JhuImportOptions {
    Country country = Country::US;
    std::string key_column = "Province_State";  // falls back to the first column
    std::map<std::string, std::int64_t> populations;  // used when no Population column
    std::optional<DateRange> window = kStudyWindow;
};

/// Wide cumulative table: one row per (sub)region, one column per date.
/// Rows sharing a key are summed; daily = first difference of cumulative,
/// clamped at 0, with the first column differenced against 0.
Dataset read_jhu_wide_csv(std::istream& in, const JhuImportOptions& options);
Dataset read_jhu_wide_csv(const std::string& path, const JhuImportOptions& options);

/// `region_id,population` lookup file.
std::map<std::string, std::int64_t> read_population_csv(const std::string& path);

std::vector<std::string> split_csv_line(const std::string& line);

std::string format_number(double v);

}  // namespace covidfc
