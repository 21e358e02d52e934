// covidfc: ingest regional case data, run the forecasting benchmark grid,
// and build the summary tables.

#include "covidfc/config.hpp"
#include "covidfc/csv_io.hpp"
#include "covidfc/experiment.hpp"
#include "covidfc/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace covidfc;

namespace {

int cmd_ingest(const std::string& input, const std::string& format, const std::string& output,
               const std::string& country, const std::string& populations, const std::string& key_column,
               bool keep_all_dates) {
    Dataset data;
    if (format == "canonical_long") {
        IngestOptions opt;
        if (keep_all_dates) opt.window.reset();
        data = read_canonical_csv(input, opt);
    } else {
        JhuImportOptions opt;
        opt.country = parse_country(country);
        if (!key_column.empty()) opt.key_column = key_column;
        if (!populations.empty()) opt.populations = read_population_csv(populations);
        if (keep_all_dates) opt.window.reset();
        data = read_jhu_wide_csv(input, opt);
    }
    write_canonical_csv(output, data.regions);
    const auto& r = data.report;
    std::cout << "regions: " << r.regions << "\nrows: " << r.rows << "\ndate span: "
              << (r.first_date ? format_iso_date(*r.first_date) : "-") << " .. "
              << (r.last_date ? format_iso_date(*r.last_date) : "-") << "\nclamped negative: " << r.clamped_negative
              << "\nfilled missing: " << r.filled_missing << "\ndropped outside window: " << r.dropped_outside
              << "\n";
    return 0;
}

int cmd_run(RunConfig config) {
    std::vector<RegionSeries> regions;
    for (const auto& path : config.data_paths) {
        auto data = read_canonical_csv(path);
        std::move(data.regions.begin(), data.regions.end(), std::back_inserter(regions));
    }
    fs::create_directories(config.output_dir);
    std::ofstream(fs::path(config.output_dir) / "config.json") << dump_run_config(config);

    const auto result = run_experiment(config, std::move(regions), (fs::path(config.output_dir) / "checkpoints").string());
    {
        std::ofstream out(fs::path(config.output_dir) / "results.csv");
        write_results_csv(out, result.scores);
    }
    {
        std::ofstream out(fs::path(config.output_dir) / "forecasts.csv");
        write_forecasts_csv(out, result.runs);
    }
    {
        std::ofstream out(fs::path(config.output_dir) / "skipped.txt");
        for (const auto& s : result.skipped) out << s << '\n';
    }
    std::cout << "scored runs: " << result.scores.size() << "\nskipped: " << result.skipped.size()
              << "\nfailures: " << result.failures.size() << '\n';
    for (const auto& f : result.failures) std::cerr << "failure: " << f << '\n';
    if (!result.scores.empty()) {
        const auto table = aggregate(result.scores, config.averaging);
        write_summary_csv(std::cout, table);
    }
    return result.ok() ? 0 : 1;
}

int cmd_report(const std::string& results, std::string out_dir, const std::string& averaging) {
    if (out_dir.empty()) out_dir = (fs::path(results).parent_path() / "report").string();
    const auto outputs = make_report(results, out_dir, averaging == "pooled" ? Averaging::Pooled : Averaging::FoldThenRegion);
    std::cout << "summary: " << outputs.summary << '\n';
    for (const auto& t : outputs.country_tables) std::cout << "table: " << t << '\n';
    std::cout << "plot files: " << outputs.plot_files.size() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Covid-19 regional case forecasting benchmark"};
    app.require_subcommand(1);

    auto* ingest = app.add_subcommand("ingest", "convert raw case data into the canonical long CSV");
    std::string input, format = "canonical_long", output, country = "US", populations, key_column;
    bool keep_all_dates = false;
    ingest->add_option("input", input, "raw data file")->required()->check(CLI::ExistingFile);
    ingest->add_option("--format", format, "input layout")->check(CLI::IsMember({"jhu_wide", "canonical_long"}));
    ingest->add_option("--out", output, "canonical CSV to write")->required();
    ingest->add_option("--country", country, "country of a jhu_wide file")->check(CLI::IsMember({"US", "RU"}));
    ingest->add_option("--populations", populations, "region_id,population CSV for jhu_wide files");
    ingest->add_option("--key-column", key_column, "column naming the region in jhu_wide files");
    ingest->add_flag("--all-dates", keep_all_dates, "keep days outside 2020-03-12..2022-02-15");

    auto* run = app.add_subcommand("run", "execute the experiment grid");
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::string run_out;
    run->add_option("--config", config_path, "JSON run config")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("--workers", workers, "override the worker count");
    run->add_option("--out", run_out, "override the output directory");

    auto* report = app.add_subcommand("report", "summarize a results CSV");
    std::string results, report_out, averaging = "fold_then_region";
    report->add_option("results", results, "results.csv from `run`")->required()->check(CLI::ExistingFile);
    report->add_option("--out", report_out, "report directory (default: <results dir>/report)");
    report->add_option("--averaging", averaging, "fold_then_region or pooled")
        ->check(CLI::IsMember({"fold_then_region", "pooled"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) return cmd_ingest(input, format, output, country, populations, key_column, keep_all_dates);
        if (*run) {
            auto config = load_run_config(config_path);
            if (seed) config.seed = *seed;
            if (workers) config.workers = *workers;
            if (!run_out.empty()) config.output_dir = run_out;
            config.validate();
            return cmd_run(std::move(config));
        }
        if (*report) return cmd_report(results, report_out, averaging);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
