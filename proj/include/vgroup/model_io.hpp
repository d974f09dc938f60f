#pragma once

#include "vgroup/affinity.hpp"
#include "vgroup/location_model.hpp"
#include "vgroup/training.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace vgroup {

inline constexpr int kModelFormatVersion = 1;

// JSON model file: {format_version, kind: "location_mlp", dims, config?,
// params}. Doubles are written in shortest round-trip form, so import of an
// export reproduces the parameters bit for bit.
std::string export_model(const LocationModel& model, const std::optional<TrainConfig>& config = std::nullopt);
// Throws FormatError.
LocationModel import_model(std::string_view text);

// Embedding table file; see EmbeddingTable::from_json.
EmbeddingTable import_embeddings(std::string_view text);

// Resolves a CLI model argument: "heuristic", or a file holding either a
// location model or an embedding table. The oracle needs a ground-truth tree
// and is built by the caller. Throws FormatError / std::runtime_error.
std::unique_ptr<AffinityModel> load_model(const std::string& spec);

std::string read_file(const std::filesystem::path& path);
// Truncates and writes. Throws std::runtime_error on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

} // namespace vgroup
