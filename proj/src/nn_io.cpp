#include "covidfc/nn/checkpoint.hpp"

#include "covidfc/csv_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace covidfc::nn {
namespace {

struct NamedTensor {
    const char* name;
    Index rows;
    Index cols;
};

std::vector<NamedTensor> layout(const LstmNetwork<double>& net) {
    std::vector<NamedTensor> out{
        {"lstm.input_kernel", net.lstm.input_kernel.rows(), net.lstm.input_kernel.cols()},
        {"lstm.recurrent_kernel", net.lstm.recurrent_kernel.rows(), net.lstm.recurrent_kernel.cols()},
        {"lstm.bias", net.lstm.bias.size(), 1}};
    if (net.kind == Architecture::NN1) {
        out.push_back({"hidden.kernel", net.hidden.kernel.rows(), net.hidden.kernel.cols()});
        out.push_back({"hidden.bias", net.hidden.bias.size(), 1});
        out.push_back({"output.kernel", net.output.kernel.rows(), net.output.kernel.cols()});
        out.push_back({"output.bias", net.output.bias.size(), 1});
    }
    return out;
}

}  // namespace

void write_history_csv(std::ostream& out, const TrainHistory& history) {
    out << "epoch,train_loss,validation_loss\n";
    for (const auto& e : history.epochs) {
        out << e.epoch << ',' << format_number(e.train_loss) << ',' << format_number(e.validation_loss) << '\n';
    }
}

void write_history_csv(const std::string& path, const TrainHistory& history) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    write_history_csv(out, history);
}

void save_checkpoint(const LstmNetwork<double>& net, const std::string& stem) {
    nlohmann::json manifest;
    manifest["architecture"] = std::string(to_string(net.kind));
    manifest["horizon"] = net.horizon;
    manifest["input_lag"] = net.input_lag;
    manifest["input_dropout"] = net.lstm.input_dropout;
    manifest["order"] = "column-major";
    for (const auto& t : layout(net)) {
        manifest["tensors"].push_back({{"name", t.name}, {"shape", {t.rows, t.cols}}});
    }

    const Vector flat = net.pack();
    std::ofstream tensors(stem + ".tensors");
    if (!tensors) throw DataError("cannot write '" + stem + ".tensors'");
    Index pos = 0;
    for (const auto& t : layout(net)) {
        for (Index i = 0; i < t.rows * t.cols; ++i) {
            if (i > 0) tensors << ' ';
            tensors << format_number(flat(pos++));
        }
        tensors << '\n';
    }
    std::ofstream(stem + ".json") << manifest.dump(2) << '\n';
}

LstmNetwork<double> load_checkpoint(const std::string& stem) {
    std::ifstream mf(stem + ".json");
    if (!mf) throw DataError("missing checkpoint manifest '" + stem + ".json'");
    const auto manifest = nlohmann::json::parse(mf);
    const auto arch = manifest.at("architecture").get<std::string>();
    if (arch != "NN1" && arch != "NN2") throw DataError("checkpoint: unknown architecture " + arch);

    auto net = make_network<double>(arch == "NN1" ? Architecture::NN1 : Architecture::NN2,
                                    manifest.at("horizon").get<int>(), 0);
    net.input_lag = manifest.at("input_lag").get<int>();
    net.lstm.input_dropout = manifest.at("input_dropout").get<double>();

    const auto expected = layout(net);
    const auto& listed = manifest.at("tensors");
    if (listed.size() != expected.size()) throw DataError("checkpoint: tensor count mismatch");
    for (std::size_t k = 0; k < expected.size(); ++k) {
        const auto shape = listed[k].at("shape").get<std::vector<Index>>();
        if (listed[k].at("name").get<std::string>() != expected[k].name || shape.size() != 2 ||
            shape[0] != expected[k].rows || shape[1] != expected[k].cols) {
            throw DataError(std::string("checkpoint: unexpected tensor ") + expected[k].name);
        }
    }

    std::ifstream tf(stem + ".tensors");
    if (!tf) throw DataError("missing checkpoint tensors '" + stem + ".tensors'");
    Vector flat(net.parameter_count());
    for (Index i = 0; i < flat.size(); ++i) {
        if (!(tf >> flat(i))) throw DataError("checkpoint: truncated tensor data");
    }
    net.unpack(flat);
    return net;
}

bool checkpoint_exists(const std::string& stem) {
    return std::filesystem::exists(stem + ".json") && std::filesystem::exists(stem + ".tensors");
}

}  // namespace covidfc::nn
