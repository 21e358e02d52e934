#pragma once

#include "covidfc/evaluation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace covidfc {

/// Long summary: `country,model,horizon,mape,regions,cells`, one row per
/// (country, model, horizon) plus an `Average` row per (country, model).
void write_summary_csv(std::ostream& out, const ScoreTable& table);

/// Wide table for one country: a row per horizon and a final Average row,
/// a column per model.
void write_country_table_csv(std::ostream& out, const ScoreTable& table, Country country);

std::vector<ForecastRun> read_forecasts_csv(std::istream& in);

/// One gnuplot-ready file per (model, region, fold, horizon) under
/// `dir/<model>/`, columns `date actual predicted`. Returns the paths.
std::vector<std::string> write_plot_files(const std::vector<ForecastRun>& runs, const std::string& dir);

struct ReportOutputs {
    std::string summary;
    std::vector<std::string> country_tables;
    std::vector<std::string> plot_files;
};

/// Reads `results_csv` (and `forecasts.csv` next to it, when present) and
/// writes every report artifact into `out_dir`.
ReportOutputs make_report(const std::string& results_csv, const std::string& out_dir,
                          Averaging averaging = Averaging::FoldThenRegion);

}  // namespace covidfc
