#include "covidfc/experiment.hpp"

#include "covidfc/csv_io.hpp"
#include "covidfc/nn/checkpoint.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <tuple>

namespace covidfc {
namespace {

struct PreparedRegion {
    const RegionSeries* raw = nullptr;
    NormalizedSeries norm;
    std::map<int, TargetSeries> targets;  // by horizon
};

struct NetworkTask {
    ModelSpec spec;
    std::string pool;  // "US", "RU" or "US-RU"
    int fold = 0;
    int horizon = 0;
    std::string key;
    std::shared_ptr<const nn::LstmNetwork<double>> network;
    std::string failure;
};

struct RegionTask {
    ModelSpec spec;
    std::size_t region = 0;
    int fold = 0;
    int horizon = 0;
    std::optional<ForecastRun> run;
    std::optional<MapeResult> score;
    std::string skipped;
    std::string failure;
};

std::string pool_of(const ModelSpec& spec, Country c) {
    return spec.data_set == 3 ? "US-RU" : std::string(to_string(c));
}

bool in_pool(const std::string& pool, Country c) { return pool == "US-RU" || pool == to_string(c); }

std::string network_key(const ModelSpec& spec, const std::string& pool, int fold, int horizon, std::uint64_t seed) {
    return std::string(model_name(spec.kind)) + "_set" + std::to_string(spec.data_set) + "_" + pool + "_fold" +
           std::to_string(fold) + "_h" + std::to_string(horizon) + "_seed" + std::to_string(seed);
}

nn::Architecture arch_of(ModelKind k) { return k == ModelKind::Nn1 ? nn::Architecture::NN1 : nn::Architecture::NN2; }

void train_network(NetworkTask& task, const RunConfig& config, const std::vector<PreparedRegion>& regions,
                   const FoldSplit& split, const std::string& checkpoint_dir) {
    const auto arch = arch_of(task.spec.kind);
    const std::string stem = checkpoint_dir.empty() ? std::string() : checkpoint_dir + "/" + task.key;
    if (!stem.empty() && nn::checkpoint_exists(stem)) {
        task.network = std::make_shared<nn::LstmNetwork<double>>(nn::load_checkpoint(stem));
        return;
    }

    std::vector<WindowSample> fit, validation;
    for (const auto& r : regions) {
        if (!in_pool(task.pool, r.raw->country)) continue;
        const DateRange train = observed_range(r.norm, split.train);
        if (train.days() < model_lag(task.spec.kind, task.horizon) + task.horizon) continue;
        try {
            auto w = nn_region_windows(r.norm, arch, task.horizon, split.train, config.nn.validation_fraction,
                                       r.raw->region_id);
            std::move(w.fit.begin(), w.fit.end(), std::back_inserter(fit));
            std::move(w.validation.begin(), w.validation.end(), std::back_inserter(validation));
        } catch (const InsufficientHistory&) {
            // too few anchors for a validation tail; region sits this fold out
        }
    }
    if (fit.empty() || validation.empty()) {
        task.failure = task.key + ": no training or validation windows";
        return;
    }

    auto net = nn::make_network<double>(arch, task.horizon, derive_seed(config.seed, task.key + "/init"));
    nn::TrainConfig tc;
    tc.batch_size = config.nn.batch_size;
    tc.learning_rate = config.nn.learning_rate;
    tc.max_epochs = config.nn.max_epochs;
    tc.early_stop_patience = config.nn.patience;
    tc.loss = nn::default_loss(arch);
    tc.seed = derive_seed(config.seed, task.key + "/train");
    const auto history = nn::train(net, tc, to_sample_matrix(fit), to_sample_matrix(validation));
    if (history.status == nn::TrainStatus::Diverged) {
        task.failure = task.key + ": training diverged (" + history.diagnostic + ")";
        return;
    }
    if (!stem.empty()) {
        nn::save_checkpoint(net, stem);
        nn::write_history_csv(stem + ".history.csv", history);
    }
    task.network = std::make_shared<nn::LstmNetwork<double>>(std::move(net));
}

void run_region_task(RegionTask& task, const RunConfig& config, const PreparedRegion& region,
                     const FoldSplit& split, const std::shared_ptr<const nn::LstmNetwork<double>>& network) {
    const std::string where = task.spec.label() + " " + region.raw->region_id + " fold " +
                              std::to_string(task.fold) + " h" + std::to_string(task.horizon);
    const DateRange train = observed_range(region.norm, split.train);
    if (train.days() < model_lag(task.spec.kind, task.horizon) + task.horizon) {
        task.skipped = where + ": " + std::to_string(std::max(0L, train.days())) + " training days";
        return;
    }
    const auto anchors = test_anchors(region.norm, split.test, task.horizon);
    if (anchors.empty()) {
        task.skipped = where + ": no test anchor";
        return;
    }
    std::unique_ptr<RegionForecaster> forecaster;
    try {
        if (is_neural(task.spec.kind)) {
            if (!network) {
                task.failure = where + ": network unavailable";
                return;
            }
            forecaster = network_forecaster(network);
        } else {
            SvrOptions svr;
            svr.max_iterations = config.svr_max_iterations;
            forecaster = fit_region_forecaster(task.spec.kind, region.norm, split.train, task.horizon, svr);
        }
    } catch (const InsufficientHistory& e) {
        task.skipped = where + ": " + e.what();
        return;
    }

    ForecastRun run;
    run.model = task.spec.label();
    run.region_id = region.raw->region_id;
    run.country = region.raw->country;
    run.fold = task.fold;
    run.horizon = task.horizon;
    const auto& target = region.targets.at(task.horizon);
    for (Date t : anchors) {
        const Index i = region.norm.index_of(t);
        ForecastPoint p;
        p.anchor = t;
        p.predicted = forecaster->predict(region.norm.values.head(i + 1));
        p.actual = target.values(target.index_of(t));
        run.points.push_back(p);
    }
    try {
        task.score = score(run);
    } catch (const UndefinedScore&) {
        task.skipped = where + ": every actual value is zero";
    }
    task.run = std::move(run);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::string_view key) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::uint64_t z = base ^ h;  // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<RegionSeries> with_country_aggregates(std::vector<RegionSeries> regions) {
    for (Country c : {Country::RU, Country::US}) {
        const std::string id = std::string(to_string(c)) + "_TOTAL";
        const bool has_country = std::any_of(regions.begin(), regions.end(), [&](const auto& r) { return r.country == c; });
        const bool has_total = std::any_of(regions.begin(), regions.end(), [&](const auto& r) { return r.region_id == id; });
        if (has_country && !has_total) {
            auto total = aggregate_country(regions, c, id);
            regions.push_back(std::move(total));
        }
    }
    return regions;
}

DateRange observed_range(const DatedSeries& series, const DateRange& range) {
    const Date first = std::max(series.start, range.first);
    const Date end = std::min(series.end(), range.end);
    return end > first ? DateRange{first, end} : DateRange{first, first};
}

std::vector<Date> test_anchors(const DatedSeries& norm, const DateRange& test, int horizon) {
    const DateRange observed = observed_range(norm, test);
    std::vector<Date> out;
    for (Date t = observed.first; t + Days{horizon} < observed.end; t += Days{1}) out.push_back(t);
    return out;
}

RegionWindows nn_region_windows(const NormalizedSeries& norm, nn::Architecture arch, int horizon,
                                const DateRange& train, double validation_fraction, std::string_view region_id) {
    const DateRange range = observed_range(norm, train);
    NormalizedSeries observed;
    observed.start = range.first;
    observed.values = range.empty() ? Vector() : Vector(norm.values.segment(norm.index_of(range.first), range.days()));

    WindowSpec spec;
    spec.lag = nn::kInputLag;
    spec.input_scale = nn::kNnScale;
    spec.target_scale = nn::kNnScale;
    std::vector<WindowSample> all;
    if (observed.size() > horizon) {
        all = arch == nn::Architecture::NN1
                  ? make_lag_windows(observed, build_target_series(observed, horizon), spec, region_id)
                  : make_daily_path_windows(observed, observed, horizon, spec, region_id);
    }
    if (all.empty()) throw InsufficientHistory("no network windows in the training range");

    const DateRange anchor_days{all.front().anchor, all.back().anchor + Days{1}};
    const auto split = validation_tail(anchor_days, validation_fraction);
    RegionWindows out;
    for (auto& s : all) {
        (split.validation.contains(s.anchor) ? out.validation : out.fit).push_back(std::move(s));
    }
    return out;
}

nn::SampleMatrix<double> to_sample_matrix(std::span<const WindowSample> samples) {
    nn::SampleMatrix<double> m;
    if (samples.empty()) return m;
    m.inputs.resize(static_cast<Index>(samples.size()), samples.front().inputs.size());
    m.targets.resize(static_cast<Index>(samples.size()), samples.front().target.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        m.inputs.row(static_cast<Index>(i)) = samples[i].inputs.transpose();
        m.targets.row(static_cast<Index>(i)) = samples[i].target.transpose();
    }
    return m;
}

ExperimentResult run_experiment(const RunConfig& config, std::vector<RegionSeries> input,
                                const std::string& checkpoint_dir) {
    config.validate();
    if (input.empty()) throw DataError("no regions to evaluate");
    const std::vector<RegionSeries> raw = config.country_aggregates ? with_country_aggregates(std::move(input))
                                                                    : std::move(input);
    std::vector<PreparedRegion> regions(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        regions[i].raw = &raw[i];
        regions[i].norm = normalize_per_100k(raw[i]);
        for (int h : config.horizons) {
            if (regions[i].norm.size() > h) regions[i].targets.emplace(h, build_target_series(regions[i].norm, h));
        }
    }
    std::sort(regions.begin(), regions.end(),
              [](const auto& a, const auto& b) { return a.raw->region_id < b.raw->region_id; });
    const auto splits = split_cumulative(config.folds);
    if (!checkpoint_dir.empty()) std::filesystem::create_directories(checkpoint_dir);

    // Networks first: one per (model, pool, fold, horizon).
    std::vector<NetworkTask> networks;
    for (const auto& spec : config.models) {
        if (!is_neural(spec.kind)) continue;
        std::vector<std::string> pools;
        for (const auto& r : regions) {
            const auto p = pool_of(spec, r.raw->country);
            if (std::find(pools.begin(), pools.end(), p) == pools.end()) pools.push_back(p);
        }
        std::sort(pools.begin(), pools.end());
        for (const auto& pool : pools) {
            for (const auto& split : splits) {
                for (int h : config.horizons) {
                    NetworkTask t;
                    t.spec = spec;
                    t.pool = pool;
                    t.fold = split.fold_index;
                    t.horizon = h;
                    t.key = network_key(spec, pool, split.fold_index, h, config.seed);
                    networks.push_back(std::move(t));
                }
            }
        }
    }
    parallel_for(networks.size(), config.workers, [&](std::size_t i) {
        auto& t = networks[i];
        try {
            train_network(t, config, regions, splits[static_cast<std::size_t>(t.fold - 1)], checkpoint_dir);
        } catch (const std::exception& e) {
            t.failure = t.key + ": " + e.what();
        }
    });
    auto find_network = [&](const ModelSpec& spec, Country c, int fold, int h) -> std::shared_ptr<const nn::LstmNetwork<double>> {
        const auto pool = pool_of(spec, c);
        for (const auto& t : networks) {
            if (t.spec.kind == spec.kind && t.spec.data_set == spec.data_set && t.pool == pool && t.fold == fold &&
                t.horizon == h) {
                return t.network;
            }
        }
        return nullptr;
    };

    std::vector<RegionTask> tasks;
    for (const auto& spec : config.models) {
        for (std::size_t r = 0; r < regions.size(); ++r) {
            for (const auto& split : splits) {
                for (int h : config.horizons) {
                    RegionTask t;
                    t.spec = spec;
                    t.region = r;
                    t.fold = split.fold_index;
                    t.horizon = h;
                    tasks.push_back(std::move(t));
                }
            }
        }
    }
    parallel_for(tasks.size(), config.workers, [&](std::size_t i) {
        auto& t = tasks[i];
        const auto& region = regions[t.region];
        try {
            std::shared_ptr<const nn::LstmNetwork<double>> net;
            if (is_neural(t.spec.kind)) net = find_network(t.spec, region.raw->country, t.fold, t.horizon);
            run_region_task(t, config, region, splits[static_cast<std::size_t>(t.fold - 1)], net);
        } catch (const std::exception& e) {
            t.failure = t.spec.label() + " " + region.raw->region_id + " fold " + std::to_string(t.fold) + " h" +
                        std::to_string(t.horizon) + ": " + e.what();
        }
    });

    ExperimentResult result;
    for (const auto& t : networks) {
        if (!t.failure.empty()) result.failures.push_back(t.failure);
    }
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto& t = tasks[i];
        if (!t.failure.empty()) result.failures.push_back(t.failure);
        if (!t.skipped.empty()) result.skipped.push_back(t.skipped);
        if (t.score) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = tasks[a];
        const auto& y = tasks[b];
        const auto& rx = *regions[x.region].raw;
        const auto& ry = *regions[y.region].raw;
        return std::make_tuple(x.spec.label(), to_string(rx.country), rx.region_id, x.fold, x.horizon) <
               std::make_tuple(y.spec.label(), to_string(ry.country), ry.region_id, y.fold, y.horizon);
    });
    for (std::size_t i : order) {
        auto& t = tasks[i];
        RunScore s;
        s.model = t.run->model;
        s.country = t.run->country;
        s.region_id = t.run->region_id;
        s.fold = t.fold;
        s.horizon = t.horizon;
        s.mape = t.score->value;
        s.n_days = t.score->n_days;
        s.n_excluded = t.score->n_excluded;
        result.scores.push_back(std::move(s));
        result.runs.push_back(std::move(*t.run));
    }
    return result;
}

void write_forecasts_csv(std::ostream& out, std::span<const ForecastRun> runs) {
    out << "model,country,region,fold,horizon,date,actual,predicted\n";
    for (const auto& r : runs) {
        for (const auto& p : r.points) {
            out << r.model << ',' << to_string(r.country) << ',' << r.region_id << ',' << r.fold << ',' << r.horizon
                << ',' << format_iso_date(p.anchor) << ',' << format_number(p.actual) << ','
                << format_number(p.predicted) << '\n';
        }
    }
}

}  // namespace covidfc
