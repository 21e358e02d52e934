#include "covidfc/report.hpp"

#include "covidfc/csv_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

namespace covidfc {
namespace {

std::string horizon_label(int h) { return h == kAverageRow ? "Average" : std::to_string(h); }

std::string safe_name(const std::string& s) {
    std::string out;
    for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_');
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    return out;
}

}  // namespace

void write_summary_csv(std::ostream& out, const ScoreTable& table) {
    out << "country,model,horizon,mape,regions,cells\n";
    for (const auto& c : table.cells) {
        out << to_string(c.country) << ',' << c.model << ',' << horizon_label(c.horizon) << ','
            << format_number(c.mape) << ',' << c.regions << ',' << c.cells << '\n';
    }
}

void write_country_table_csv(std::ostream& out, const ScoreTable& table, Country country) {
    std::vector<std::string> models;
    std::set<int> horizons;
    for (const auto& c : table.cells) {
        if (c.country != country) continue;
        if (std::find(models.begin(), models.end(), c.model) == models.end()) models.push_back(c.model);
        if (c.horizon != kAverageRow) horizons.insert(c.horizon);
    }
    out << "Forecast Horizon";
    for (const auto& m : models) out << ',' << m;
    out << '\n';
    std::vector<int> rows(horizons.begin(), horizons.end());
    rows.push_back(kAverageRow);
    char buf[32];
    for (int h : rows) {
        out << (h == kAverageRow ? std::string("Average") : std::to_string(h) + " days");
        for (const auto& m : models) {
            const auto v = table.lookup(m, h, country);
            if (v) {
                std::snprintf(buf, sizeof buf, "%.1f", *v);
                out << ',' << buf;
            } else {
                out << ',';
            }
        }
        out << '\n';
    }
}

std::vector<ForecastRun> read_forecasts_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "model,country,region,fold,horizon,date,actual,predicted") {
        throw DataError("forecasts CSV: unexpected header");
    }
    std::vector<ForecastRun> runs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8) throw DataError("forecasts CSV line " + std::to_string(line_no) + ": expected 8 fields");
        try {
            const int fold = std::stoi(f[3]);
            const int horizon = std::stoi(f[4]);
            if (runs.empty() || runs.back().model != f[0] || runs.back().region_id != f[2] ||
                runs.back().fold != fold || runs.back().horizon != horizon) {
                ForecastRun r;
                r.model = f[0];
                r.country = parse_country(f[1]);
                r.region_id = f[2];
                r.fold = fold;
                r.horizon = horizon;
                runs.push_back(std::move(r));
            }
            runs.back().points.push_back({parse_iso_date(f[5]), std::stod(f[7]), std::stod(f[6])});
        } catch (const std::exception& e) {
            throw DataError("forecasts CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return runs;
}

std::vector<std::string> write_plot_files(const std::vector<ForecastRun>& runs, const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& r : runs) {
        const auto model_dir = std::filesystem::path(dir) / safe_name(r.model);
        std::filesystem::create_directories(model_dir);
        const auto path = (model_dir / (safe_name(r.region_id) + "_fold" + std::to_string(r.fold) + "_h" +
                                        std::to_string(r.horizon) + ".dat"))
                              .string();
        auto out = open_output(path);
        out << "# " << r.model << ' ' << r.region_id << " fold " << r.fold << " horizon " << r.horizon << '\n';
        out << "# date actual predicted\n";
        std::vector<ForecastPoint> points = r.points;
        std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.anchor < b.anchor; });
        for (const auto& p : points) {
            out << format_iso_date(p.anchor) << ' ' << format_number(p.actual) << ' ' << format_number(p.predicted)
                << '\n';
        }
        paths.push_back(path);
    }
    return paths;
}

ReportOutputs make_report(const std::string& results_csv, const std::string& out_dir, Averaging averaging) {
    std::ifstream in(results_csv);
    if (!in) throw DataError("cannot open '" + results_csv + "'");
    const auto rows = read_results_csv(in);
    const auto table = aggregate(rows, averaging);
    std::filesystem::create_directories(out_dir);

    ReportOutputs outputs;
    outputs.summary = (std::filesystem::path(out_dir) / "summary.csv").string();
    {
        auto out = open_output(outputs.summary);
        write_summary_csv(out, table);
    }
    for (Country c : {Country::RU, Country::US}) {
        const bool present = std::any_of(table.cells.begin(), table.cells.end(), [&](const auto& x) { return x.country == c; });
        if (!present) continue;
        const auto path = (std::filesystem::path(out_dir) / ("table_" + std::string(to_string(c)) + ".csv")).string();
        auto out = open_output(path);
        write_country_table_csv(out, table, c);
        outputs.country_tables.push_back(path);
    }
    const auto forecasts = std::filesystem::path(results_csv).parent_path() / "forecasts.csv";
    if (std::filesystem::exists(forecasts)) {
        std::ifstream fin(forecasts);
        outputs.plot_files = write_plot_files(read_forecasts_csv(fin), (std::filesystem::path(out_dir) / "plots").string());
    }
    return outputs;
}

}  // namespace covidfc
