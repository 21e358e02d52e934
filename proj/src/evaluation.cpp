#include "covidfc/evaluation.hpp"

#include "covidfc/csv_io.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <tuple>

namespace covidfc {

MapeResult mape(const Eigen::Ref<const Vector>& actuals, const Eigen::Ref<const Vector>& forecasts) {
    if (actuals.size() != forecasts.size()) throw ConfigError("mape: length mismatch");
    MapeResult r;
    double acc = 0.0;
    for (Index t = 0; t < actuals.size(); ++t) {
        if (actuals(t) == 0.0) {
            ++r.n_excluded;
            continue;
        }
        acc += 100.0 * std::abs(actuals(t) - forecasts(t)) / std::abs(actuals(t));
        ++r.n_days;
    }
    if (r.n_days == 0) throw UndefinedScore("mape: no day with a non-zero actual value");
    r.value = acc / static_cast<double>(r.n_days);
    return r;
}

MapeResult score(const ForecastRun& run) {
    Vector a(static_cast<Index>(run.points.size())), f(a.size());
    for (std::size_t i = 0; i < run.points.size(); ++i) {
        a(static_cast<Index>(i)) = run.points[i].actual;
        f(static_cast<Index>(i)) = run.points[i].predicted;
    }
    return mape(a, f);
}

std::optional<double> ScoreTable::lookup(const std::string& model, int horizon, Country country) const {
    for (const auto& c : cells) {
        if (c.model == model && c.horizon == horizon && c.country == country) return c.mape;
    }
    return std::nullopt;
}

ScoreTable aggregate(std::span<const RunScore> runs, Averaging averaging) {
    if (runs.empty()) throw ConfigError("aggregate: no runs");
    using Key = std::tuple<Country, std::string, int>;  // country, model, horizon
    // key -> region -> fold MAPEs. Ordered containers fix the summation order.
    std::map<Key, std::map<std::string, std::map<int, double>>> grid;
    for (const auto& r : runs) grid[{r.country, r.model, r.horizon}][r.region_id][r.fold] = r.mape;

    ScoreTable table;
    std::map<std::pair<Country, std::string>, std::vector<double>> by_horizon;
    for (const auto& [key, regions] : grid) {
        ScoreCell cell;
        std::tie(cell.country, cell.model, cell.horizon) = key;
        double total = 0.0;
        for (const auto& [region, folds] : regions) {
            double fold_sum = 0.0;
            for (const auto& [fold, value] : folds) fold_sum += value;
            if (averaging == Averaging::FoldThenRegion) {
                total += fold_sum / static_cast<double>(folds.size());
            } else {
                total += fold_sum;
            }
            cell.cells += static_cast<int>(folds.size());
            ++cell.regions;
        }
        cell.mape = total / (averaging == Averaging::FoldThenRegion ? cell.regions : cell.cells);
        by_horizon[{cell.country, cell.model}].push_back(cell.mape);
        table.cells.push_back(cell);
    }
    for (const auto& [key, values] : by_horizon) {
        ScoreCell avg;
        avg.country = key.first;
        avg.model = key.second;
        avg.horizon = kAverageRow;
        double s = 0.0;
        for (double v : values) s += v;
        avg.mape = s / static_cast<double>(values.size());
        avg.regions = 0;
        for (const auto& c : table.cells) {
            if (c.country == avg.country && c.model == avg.model) {
                avg.regions = std::max(avg.regions, c.regions);
                avg.cells += c.cells;
            }
        }
        table.cells.push_back(avg);
    }
    std::stable_sort(table.cells.begin(), table.cells.end(), [](const ScoreCell& a, const ScoreCell& b) {
        const int ha = a.horizon == kAverageRow ? 1 << 30 : a.horizon;
        const int hb = b.horizon == kAverageRow ? 1 << 30 : b.horizon;
        return std::tie(a.country, a.model, ha) < std::tie(b.country, b.model, hb);
    });
    return table;
}

void write_results_csv(std::ostream& out, std::span<const RunScore> rows) {
    out << "model,country,region,fold,horizon,mape,n_days,n_excluded\n";
    for (const auto& r : rows) {
        out << r.model << ',' << to_string(r.country) << ',' << r.region_id << ',' << r.fold << ','
            << r.horizon << ',' << format_number(r.mape) << ',' << r.n_days << ',' << r.n_excluded << '\n';
    }
}

std::vector<RunScore> read_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty results CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "model,country,region,fold,horizon,mape,n_days,n_excluded") {
        throw DataError("results CSV: unexpected header '" + line + "'");
    }
    std::vector<RunScore> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8) throw DataError("results CSV line " + std::to_string(line_no) + ": expected 8 fields");
        try {
            RunScore r;
            r.model = f[0];
            r.country = parse_country(f[1]);
            r.region_id = f[2];
            r.fold = std::stoi(f[3]);
            r.horizon = std::stoi(f[4]);
            r.mape = std::stod(f[5]);
            r.n_days = std::stol(f[6]);
            r.n_excluded = std::stol(f[7]);
            out.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw DataError("results CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace covidfc
