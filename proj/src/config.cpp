#include "covidfc/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace covidfc {

using nlohmann::json;

std::string ModelSpec::label() const {
    std::string s(model_name(kind));
    if (is_neural(kind)) s += "-set" + std::to_string(data_set);
    return s;
}

void RunConfig::validate() const {
    if (models.empty()) throw ConfigError("config: no models");
    if (horizons.empty()) throw ConfigError("config: no horizons");
    for (int h : horizons) {
        if (h != 14 && h != 28 && h != 42) {
            throw ConfigError("config: horizon " + std::to_string(h) + " is not one of 14, 28, 42");
        }
    }
    for (const auto& m : models) {
        if (is_neural(m.kind)) {
            if (m.data_set != 2 && m.data_set != 3) {
                throw ConfigError("config: " + std::string(model_name(m.kind)) +
                                  " needs data set 2 or 3 (a single region is too little data)");
            }
        } else if (m.data_set != 1) {
            throw ConfigError("config: " + std::string(model_name(m.kind)) + " is fitted per region (set 1)");
        }
    }
    if (workers < 1) throw ConfigError("config: workers must be at least 1");
    if (!(nn.validation_fraction > 0.0 && nn.validation_fraction < 1.0)) {
        throw ConfigError("config: nn.validation_fraction must be in (0,1)");
    }
    if (nn.max_epochs <= 0 || nn.patience <= 0 || nn.batch_size <= 0 || !(nn.learning_rate > 0.0)) {
        throw ConfigError("config: nn settings must be positive");
    }
    if (svr_max_iterations <= 0) throw ConfigError("config: svr.max_iterations must be positive");
    folds.validate();
}

RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir) {
    RunConfig c;
    try {
        const auto j = json::parse(json_text);
        for (const auto& p : j.at("data")) {
            std::filesystem::path path = p.get<std::string>();
            if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
            c.data_paths.push_back(path.lexically_normal().string());
        }
        c.country_aggregates = j.value("country_aggregates", true);
        for (const auto& m : j.at("models")) {
            ModelSpec spec;
            spec.kind = parse_model(m.at("name").get<std::string>());
            spec.data_set = m.value("set", is_neural(spec.kind) ? 3 : 1);
            c.models.push_back(spec);
        }
        if (j.contains("horizons")) c.horizons = j.at("horizons").get<std::vector<int>>();
        if (j.contains("folds")) {
            const auto& f = j.at("folds");
            if (f.contains("start")) c.folds.global_start = parse_iso_date(f.at("start").get<std::string>());
            if (f.contains("end")) c.folds.global_end = parse_iso_date(f.at("end").get<std::string>());
            if (f.contains("boundaries")) {
                const auto b = f.at("boundaries").get<std::vector<std::string>>();
                if (b.size() != kFoldCount) throw ConfigError("config: folds.boundaries needs 5 dates");
                for (std::size_t k = 0; k < b.size(); ++k) c.folds.boundaries[k] = parse_iso_date(b[k]);
            }
        }
        c.seed = j.value("seed", std::uint64_t{0});
        c.workers = j.value("workers", 1);
        c.output_dir = j.value("output", std::string("out"));
        const auto averaging = j.value("averaging", std::string("fold_then_region"));
        if (averaging == "fold_then_region") {
            c.averaging = Averaging::FoldThenRegion;
        } else if (averaging == "pooled") {
            c.averaging = Averaging::Pooled;
        } else {
            throw ConfigError("config: averaging must be fold_then_region or pooled");
        }
        if (j.contains("nn")) {
            const auto& n = j.at("nn");
            c.nn.max_epochs = n.value("max_epochs", c.nn.max_epochs);
            c.nn.patience = n.value("patience", c.nn.patience);
            c.nn.batch_size = n.value("batch_size", c.nn.batch_size);
            c.nn.learning_rate = n.value("learning_rate", c.nn.learning_rate);
            c.nn.validation_fraction = n.value("validation_fraction", c.nn.validation_fraction);
        }
        if (j.contains("svr")) c.svr_max_iterations = j.at("svr").value("max_iterations", 5000);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const DataError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    const auto base = std::filesystem::path(path).parent_path();
    return parse_run_config(text.str(), base.empty() ? "." : base.string());
}

std::string dump_run_config(const RunConfig& c) {
    json j;
    j["data"] = c.data_paths;
    j["country_aggregates"] = c.country_aggregates;
    for (const auto& m : c.models) j["models"].push_back({{"name", std::string(model_name(m.kind))}, {"set", m.data_set}});
    j["horizons"] = c.horizons;
    j["folds"]["start"] = format_iso_date(c.folds.global_start);
    j["folds"]["end"] = format_iso_date(c.folds.global_end);
    for (auto b : c.folds.boundaries) j["folds"]["boundaries"].push_back(format_iso_date(b));
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["output"] = c.output_dir;
    j["averaging"] = c.averaging == Averaging::FoldThenRegion ? "fold_then_region" : "pooled";
    j["nn"] = {{"max_epochs", c.nn.max_epochs},
               {"patience", c.nn.patience},
               {"batch_size", c.nn.batch_size},
               {"learning_rate", c.nn.learning_rate},
               {"validation_fraction", c.nn.validation_fraction}};
    j["svr"] = {{"max_iterations", c.svr_max_iterations}};
    return j.dump(2) + "\n";
}

}  // namespace covidfc
