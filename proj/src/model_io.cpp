#include "vgroup/model_io.hpp"

#include "vgroup/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace vgroup {

using nlohmann::json;

std::string export_model(const LocationModel& model, const std::optional<TrainConfig>& config) {
    json j;
    j["format_version"] = kModelFormatVersion;
    j["kind"] = "location_mlp";
    j["dims"] = LocationModel::kDims;
    if (config) j["config"] = json::parse(to_json(*config));
    j["params"] = model.params();
    return j.dump();
}

LocationModel import_model(std::string_view text) {
    try {
        const json j = json::parse(text);
        if (!j.is_object()) throw FormatError("model file: expected an object");
        if (j.at("format_version").get<int>() != kModelFormatVersion) {
            throw FormatError("model file: unsupported format_version " + j.at("format_version").dump());
        }
        if (j.at("kind").get<std::string>() != "location_mlp") throw FormatError("model file: unknown kind");
        const auto dims = j.at("dims").get<std::vector<int>>();
        if (dims != std::vector<int>(LocationModel::kDims.begin(), LocationModel::kDims.end())) {
            throw FormatError("model file: layer sizes " + j.at("dims").dump() + " do not match 4-128-128-64");
        }
        auto params = j.at("params").get<std::vector<double>>();
        if (params.size() != LocationModel::param_count()) {
            throw FormatError("model file: expected " + std::to_string(LocationModel::param_count()) + " parameters, got " +
                              std::to_string(params.size()));
        }
        for (double p : params) {
            if (!std::isfinite(p)) throw FormatError("model file: non-finite parameter");
        }
        LocationModel m;
        m.params() = std::move(params);
        return m;
    } catch (const json::exception& e) {
        throw FormatError(std::string("model file: ") + e.what());
    }
}

EmbeddingTable import_embeddings(std::string_view text) { return EmbeddingTable::from_json(text); }

std::unique_ptr<AffinityModel> load_model(const std::string& spec) {
    if (spec == "heuristic") return std::make_unique<HeuristicAffinity>();
    const std::string text = read_file(spec);
    bool is_location = false;
    try {
        const json j = json::parse(text);
        is_location = j.is_object() && j.contains("kind");
    } catch (const json::exception& e) {
        throw FormatError(std::string("model file: ") + e.what());
    }
    if (is_location) return std::make_unique<LocationModel>(import_model(text));
    return std::make_unique<EmbeddingTable>(import_embeddings(text));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

} // namespace vgroup
