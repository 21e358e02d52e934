#include "covidfc/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <set>

namespace covidfc {
namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return in;
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

[[noreturn]] void fail_at(std::size_t line_no, const std::string& what) {
    throw DataError("line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& text, std::size_t line_no, const char* field) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        fail_at(line_no, std::string("bad ") + field + " '" + text + "'");
    }
    return v;
}

std::int64_t parse_int(const std::string& text, std::size_t line_no, const char* field) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        fail_at(line_no, std::string("bad ") + field + " '" + text + "'");
    }
    return v;
}

struct PendingRegion {
    Country country = Country::RU;
    std::int64_t population = 0;
    std::map<Date, double> days;
};

// Turns date-keyed values into gap-free series: clamp, fill, window.
Dataset finalize(std::map<std::string, PendingRegion>& pending,
                 const std::optional<DateRange>& window, IngestReport report) {
    Dataset out;
    for (auto& [id, p] : pending) {
        std::map<Date, double> kept;
        for (auto [d, v] : p.days) {
            if (window && !window->contains(d)) {
                ++report.dropped_outside;
                continue;
            }
            if (v < 0.0) {
                ++report.clamped_negative;
                v = 0.0;
            }
            kept.emplace(d, v);
        }
        if (kept.empty()) {
            std::clog << "warning: region '" << id << "' has no days inside the window; dropped\n";
            continue;
        }
        RegionSeries r;
        r.region_id = id;
        r.country = p.country;
        r.population = p.population;
        r.start = kept.begin()->first;
        const Date end = kept.rbegin()->first + Days{1};
        r.daily_confirmed = Vector::Zero((end - r.start).count());
        for (auto [d, v] : kept) r.daily_confirmed((d - r.start).count()) = v;
        const auto missing = static_cast<std::size_t>(r.daily_confirmed.size()) - kept.size();
        if (missing > 0) {
            std::clog << "warning: region '" << id << "': " << missing
                      << " missing day(s) filled with 0\n";
            report.filled_missing += missing;
        }
        report.first_date = report.first_date ? std::min(*report.first_date, r.start) : r.start;
        const Date last = end - Days{1};
        report.last_date = report.last_date ? std::max(*report.last_date, last) : last;
        report.rows += static_cast<std::size_t>(r.daily_confirmed.size());
        out.regions.push_back(std::move(r));
    }
    if (report.clamped_negative > 0) {
        std::clog << "warning: clamped " << report.clamped_negative
                  << " negative daily value(s) to 0\n";
    }
    report.regions = out.regions.size();
    out.report = report;
    return out;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Dataset read_canonical_csv(std::istream& in, const IngestOptions& options) {
    std::string line;
    if (!next_line(in, line)) throw DataError("empty canonical CSV");
    if (line != "region_id,country,population,date,confirmed_daily") {
        fail_at(1, "unexpected header '" + line + "'");
    }
    std::map<std::string, PendingRegion> pending;
    std::size_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 5) fail_at(line_no, "expected 5 fields, got " + std::to_string(f.size()));
        Date date{};
        Country country{};
        try {
            date = parse_iso_date(f[3]);
            country = parse_country(f[1]);
        } catch (const DataError& e) {
            fail_at(line_no, e.what());
        }
        const auto population = parse_int(f[2], line_no, "population");
        if (population <= 0) fail_at(line_no, "population must be positive");
        const double value = parse_double(f[4], line_no, "confirmed_daily");

        auto [it, inserted] = pending.try_emplace(f[0]);
        auto& region = it->second;
        if (inserted) {
            region.country = country;
            region.population = population;
        } else if (region.country != country || region.population != population) {
            fail_at(line_no, "country/population differ from earlier rows of '" + f[0] + "'");
        }
        if (!region.days.emplace(date, value).second) {
            fail_at(line_no, "duplicate date " + f[3] + " for '" + f[0] + "'");
        }
    }
    return finalize(pending, options.window, {});
}

Dataset read_canonical_csv(const std::string& path, const IngestOptions& options) {
    auto in = open_input(path);
    return read_canonical_csv(in, options);
}

void write_canonical_csv(std::ostream& out, const std::vector<RegionSeries>& regions) {
    std::vector<const RegionSeries*> sorted;
    for (const auto& r : regions) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](auto* a, auto* b) { return a->region_id < b->region_id; });
    out << "region_id,country,population,date,confirmed_daily\n";
    for (const auto* r : sorted) {
        const std::string prefix =
            r->region_id + "," + std::string(to_string(r->country)) + "," + std::to_string(r->population) + ",";
        for (Index i = 0; i < r->daily_confirmed.size(); ++i) {
            out << prefix << format_iso_date(r->start + Days{i}) << ','
                << format_number(r->daily_confirmed(i)) << '\n';
        }
    }
}

void write_canonical_csv(const std::string& path, const std::vector<RegionSeries>& regions) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    write_canonical_csv(out, regions);
}

Dataset read_jhu_wide_csv(std::istream& in, const JhuImportOptions& options) {
    std::string line;
    if (!next_line(in, line)) throw DataError("empty JHU CSV");
    const auto header = split_csv_line(line);

    std::size_t key_col = 0;
    std::optional<std::size_t> pop_col;
    std::vector<std::pair<std::size_t, Date>> date_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == options.key_column) key_col = c;
        if (header[c] == "Population") pop_col = c;
        try {
            date_cols.emplace_back(c, header[c].find('/') != std::string::npos
                                          ? parse_us_short_date(header[c])
                                          : parse_iso_date(header[c]));
        } catch (const DataError&) {
            // not a date column
        }
    }
    if (date_cols.empty()) fail_at(1, "no date columns in header");
    std::sort(date_cols.begin(), date_cols.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    for (std::size_t i = 1; i < date_cols.size(); ++i) {
        if (date_cols[i].second == date_cols[i - 1].second) fail_at(1, "duplicate date column");
    }

    struct Cumulative {
        std::int64_t population = 0;
        std::vector<double> values;
    };
    std::map<std::string, Cumulative> cumulative;
    IngestReport report;
    std::size_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) {
            fail_at(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(f.size()));
        }
        auto& acc = cumulative[f[key_col]];
        if (acc.values.empty()) acc.values.assign(date_cols.size(), 0.0);
        if (pop_col) acc.population += parse_int(f[*pop_col], line_no, "Population");
        double previous = 0.0;
        for (std::size_t k = 0; k < date_cols.size(); ++k) {
            const auto& cell = f[date_cols[k].first];
            double v = previous;
            if (cell.empty()) {
                ++report.filled_missing;
            } else {
                v = parse_double(cell, line_no, "cumulative count");
            }
            acc.values[k] += v;
            previous = v;
        }
    }

    std::map<std::string, PendingRegion> pending;
    for (auto& [key, acc] : cumulative) {
        auto& p = pending[key];
        p.country = options.country;
        p.population = acc.population;
        if (p.population <= 0) {
            const auto it = options.populations.find(key);
            if (it == options.populations.end()) {
                throw DataError("no population for region '" + key + "'");
            }
            p.population = it->second;
        }
        double previous = 0.0;
        // A cumulative jump across missing date columns lands on the later day.
        for (std::size_t k = 0; k < date_cols.size(); ++k) {
            p.days.emplace(date_cols[k].second, acc.values[k] - previous);
            previous = acc.values[k];
        }
    }
    return finalize(pending, options.window, report);
}

Dataset read_jhu_wide_csv(const std::string& path, const JhuImportOptions& options) {
    auto in = open_input(path);
    return read_jhu_wide_csv(in, options);
}

std::map<std::string, std::int64_t> read_population_csv(const std::string& path) {
    auto in = open_input(path);
    std::string line;
    std::map<std::string, std::int64_t> out;
    std::size_t line_no = 0;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty() || (line_no == 1 && line.rfind("region_id", 0) == 0)) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 2) fail_at(line_no, "expected region_id,population");
        out[f[0]] = parse_int(f[1], line_no, "population");
    }
    return out;
}

}  // namespace covidfc
