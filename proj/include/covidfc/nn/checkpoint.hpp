#pragma once

#include "covidfc/nn/network.hpp"
#include "covidfc/nn/train.hpp"

#include <string>

namespace covidfc::nn {

/// Writes `<stem>.json` (architecture, horizon, dropout, tensor names and
/// shapes) and `<stem>.tensors` (one line per tensor, column-major values).
void save_checkpoint(const LstmNetwork<double>& net, const std::string& stem);

LstmNetwork<double> load_checkpoint(const std::string& stem);

bool checkpoint_exists(const std::string& stem);

void write_history_csv(const std::string& path, const TrainHistory& history);

}  // namespace covidfc::nn
