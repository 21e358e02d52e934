#pragma once

#include "covidfc/evaluation.hpp"
#include "covidfc/folds.hpp"
#include "covidfc/forecasters.hpp"
#include "covidfc/nn/train.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace covidfc {

/// Training-data regime: 1 = the region alone, 2 = every region of the
/// region's country, 3 = every region of both countries.
struct ModelSpec {
    ModelKind kind = ModelKind::DDaily;
    int data_set = 1;

    /// Column name in results: the model name, plus "-set<k>" for networks.
    [[nodiscard]] std::string label() const;
};

struct NnSettings {
    int max_epochs = 1000;
    int patience = 100;
    int batch_size = 200;
    double learning_rate = 0.003;
    double validation_fraction = 0.20;
};

struct RunConfig {
    std::vector<std::string> data_paths;  // canonical long CSV files
    bool country_aggregates = true;
    std::vector<ModelSpec> models;
    std::vector<int> horizons{14, 28, 42};
    FoldPlan folds;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string output_dir = "out";
    Averaging averaging = Averaging::FoldThenRegion;
    NnSettings nn;
    int svr_max_iterations = 5000;

    /// Rejects invalid model/set pairings, horizons and fold plans.
    void validate() const;
};

/// JSON config; relative data paths resolve against the config's directory.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir = ".");
std::string dump_run_config(const RunConfig& config);

}  // namespace covidfc
