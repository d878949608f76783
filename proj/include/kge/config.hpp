#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kge/model.hpp"
#include "kge/training.hpp"

namespace kge {

// Flat "key = value" dialect with '#' comments. Keys are dotted paths that
// mirror the hyperparameter table rows (e.g. "negsamp.neg_subjects").
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);
std::string dump_config(const ConfigMap& map);

struct ConfigIssue {
    std::string key;
    std::string message;
};

// Validates a config map against the schema; on success fills kind/config.
// Every violation is reported with its key path and the permitted range.
std::vector<ConfigIssue> validate_config(const ConfigMap& map, ModelKind* kind_out,
                                         TrainConfig* config_out);
std::vector<ConfigIssue> validate_config(const std::string& text, ModelKind* kind_out,
                                         TrainConfig* config_out);

struct ParsedTrainConfig {
    ModelKind kind = ModelKind::ComplEx;
    TrainConfig config;
};

// Throws ConfigError listing every issue.
ParsedTrainConfig load_train_config_text(const std::string& text);
ParsedTrainConfig load_train_config_file(const std::string& path);

ConfigMap train_config_to_map(ModelKind kind, const TrainConfig& config);

// Shipped best-found configurations (six whole-graph presets and eight
// downstream presets). Throws ConfigError for unknown names.
const std::map<std::string, std::string>& preset_texts();
ParsedTrainConfig load_preset(const std::string& name);

}  // namespace kge
