#include "kge/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kge {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError("config line " + std::to_string(lineno) + ": empty key");
        map[key] = value;
    }
    return map;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string dump_config(const ConfigMap& map) {
    std::string out;
    for (const auto& [k, v] : map) {
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    }
    return out;
}

namespace {

class Schema {
public:
    Schema(const ConfigMap& map, std::vector<ConfigIssue>& issues)
        : map_(map), issues_(issues) {}

    bool has(const std::string& key) const { return map_.count(key) > 0; }

    std::optional<std::string> raw(const std::string& key) {
        consumed_.push_back(key);
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    double number(const std::string& key, double lo, double hi, double fallback,
                  const std::string& range_text) {
        auto v = raw(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            double x = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing characters");
            if (x < lo || x > hi) {
                issues_.push_back({key, "value " + *v + " outside permitted range " + range_text});
                return fallback;
            }
            return x;
        } catch (const std::exception&) {
            issues_.push_back({key, "not a number: " + *v});
            return fallback;
        }
    }

    long integer(const std::string& key, long lo, long hi, long fallback,
                 const std::string& range_text) {
        auto v = raw(key);
        if (!v) return fallback;
        try {
            std::size_t pos = 0;
            long x = std::stol(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("trailing characters");
            if (x < lo || x > hi) {
                issues_.push_back({key, "value " + *v + " outside permitted range " + range_text});
                return fallback;
            }
            return x;
        } catch (const std::exception&) {
            issues_.push_back({key, "not an integer: " + *v});
            return fallback;
        }
    }

    long choice_int(const std::string& key, const std::vector<long>& allowed, long fallback) {
        auto v = raw(key);
        if (!v) return fallback;
        try {
            long x = std::stol(*v);
            if (std::find(allowed.begin(), allowed.end(), x) == allowed.end()) {
                std::string opts;
                for (long a : allowed) opts += (opts.empty() ? "" : ", ") + std::to_string(a);
                issues_.push_back({key, "value " + *v + " not in {" + opts + "}"});
                return fallback;
            }
            return x;
        } catch (const std::exception&) {
            issues_.push_back({key, "not an integer: " + *v});
            return fallback;
        }
    }

    bool boolean(const std::string& key, bool fallback) {
        auto v = raw(key);
        if (!v) return fallback;
        std::string n = lower(*v);
        if (n == "true" || n == "yes" || n == "1") return true;
        if (n == "false" || n == "no" || n == "0") return false;
        issues_.push_back({key, "expected true/false: " + *v});
        return fallback;
    }

    template <typename Fn>
    auto parsed(const std::string& key, Fn parse, decltype(parse(std::string{})) fallback)
        -> decltype(parse(std::string{})) {
        auto v = raw(key);
        if (!v) return fallback;
        try {
            return parse(*v);
        } catch (const ConfigError& e) {
            issues_.push_back({key, e.what()});
            return fallback;
        }
    }

    void check_unknown() {
        for (const auto& [k, v] : map_) {
            if (std::find(consumed_.begin(), consumed_.end(), k) == consumed_.end())
                issues_.push_back({k, "unknown key"});
        }
    }

private:
    const ConfigMap& map_;
    std::vector<ConfigIssue>& issues_;
    std::vector<std::string> consumed_;
};

}  // namespace

std::vector<ConfigIssue> validate_config(const ConfigMap& map, ModelKind* kind_out,
                                         TrainConfig* config_out) {
    std::vector<ConfigIssue> issues;
    Schema s(map, issues);
    TrainConfig cfg;
    ModelKind kind = ModelKind::ComplEx;

    if (!s.has("model")) issues.push_back({"model", "required key missing"});
    kind = s.parsed("model", [](const std::string& v) { return kind_from_name(v); },
                    ModelKind::ComplEx);
    cfg.norm = s.parsed("model.norm",
                        [](const std::string& v) {
                            std::string n = lower(v);
                            if (n == "l1") return NormOrder::L1;
                            if (n == "l2") return NormOrder::L2;
                            throw ConfigError("expected L1 or L2");
                        },
                        NormOrder::L2);

    if (!s.has("embedding_size")) issues.push_back({"embedding_size", "required key missing"});
    cfg.dim = int(s.integer("embedding_size", 1, 1 << 20, 128, "[1, inf)"));

    cfg.training_type = s.parsed(
        "training_type", [](const std::string& v) { return training_type_from_name(v); },
        TrainingType::OneVsAll);
    cfg.neg_subjects = int(s.integer("negsamp.neg_subjects", 1, 100, 1, "[1, 100]"));
    cfg.neg_objects = int(s.integer("negsamp.neg_objects", 1, 100, 1, "[1, 100]"));
    cfg.max_epochs = int(s.integer("max_epochs", 1, 1000000, 200, "[1, inf)"));
    cfg.reciprocal = s.boolean("reciprocal", false);

    if (auto loss = s.raw("loss")) {
        if (lower(*loss) != "ce")
            issues.push_back({"loss", "only CE is supported; got " + *loss});
    }

    cfg.optimizer = s.parsed(
        "optimizer", [](const std::string& v) { return optimizer_from_name(v); },
        OptimizerKind::Adagrad);
    cfg.batch_size = int(s.choice_int("optimizer.batch_size", {128, 256, 512, 1024}, 128));
    if (!s.has("optimizer.learning_rate"))
        issues.push_back({"optimizer.learning_rate", "required key missing"});
    cfg.learning_rate =
        s.number("optimizer.learning_rate", 0.0003, 1.0, 0.1, "[0.0003, 1.0]");
    cfg.scheduler_patience =
        int(s.integer("optimizer.scheduler_patience", 0, 10, 10, "[0, 10]"));

    cfg.regularizer.type = s.parsed(
        "regularizer", [](const std::string& v) { return regularizer_from_name(v); },
        RegularizerType::None);
    if (cfg.regularizer.type != RegularizerType::None) {
        cfg.regularizer.entity_weight =
            s.number("regularizer.entity_weight", 1e-20, 1e-1, 1e-10, "[1e-20, 1e-1]");
        cfg.regularizer.relation_weight =
            s.number("regularizer.relation_weight", 1e-20, 1e-1, 1e-10, "[1e-20, 1e-1]");
    } else {
        s.raw("regularizer.entity_weight");
        s.raw("regularizer.relation_weight");
    }
    cfg.regularizer.frequency_weighting = s.boolean("regularizer.frequency_weighting", false);

    cfg.dropout_entity = s.number("dropout.entity_embedding", -0.5, 0.5, 0.0, "[-0.5, 0.5]");
    cfg.dropout_relation =
        s.number("dropout.relation_embedding", -0.5, 0.5, 0.0, "[-0.5, 0.5]");

    cfg.init.family = s.parsed(
        "init", [](const std::string& v) { return init_family_from_name(v); },
        InitSpec::Family::Normal);
    if (cfg.init.family == InitSpec::Family::Normal) {
        cfg.init.normal_std = s.number("init.normal_std", 1e-5, 1.0, 0.1, "[0.00001, 1.0]");
    } else {
        s.raw("init.normal_std");
    }
    if (cfg.init.family == InitSpec::Family::Uniform) {
        cfg.init.uniform_lower =
            s.number("init.uniform_lower_bound", -1.0, -1e-5, -0.1, "[-1.0, -0.00001]");
    } else {
        s.raw("init.uniform_lower_bound");
    }

    cfg.seed = std::uint64_t(s.integer("seed", 0, std::numeric_limits<long>::max(), 0,
                                       "[0, inf)"));
    cfg.workers = int(s.integer("workers", 1, 1024, 1, "[1, 1024]"));
    cfg.early_stop_checks =
        int(s.integer("early_stop_checks", 0, 1000000, 10, "[0, inf); 0 disables"));

    if (complex_domain(kind) && cfg.dim % 2 != 0)
        issues.push_back({"embedding_size",
                          "must be even for complex-domain models (ComplEx, RotatE)"});

    s.check_unknown();

    if (issues.empty()) {
        if (kind_out) *kind_out = kind;
        if (config_out) *config_out = cfg;
    }
    return issues;
}

std::vector<ConfigIssue> validate_config(const std::string& text, ModelKind* kind_out,
                                         TrainConfig* config_out) {
    return validate_config(parse_config_text(text), kind_out, config_out);
}

ParsedTrainConfig load_train_config_text(const std::string& text) {
    ParsedTrainConfig out;
    auto issues = validate_config(text, &out.kind, &out.config);
    if (!issues.empty()) {
        std::string msg = "invalid config:";
        for (const auto& i : issues) msg += "\n  " + i.key + ": " + i.message;
        throw ConfigError(msg);
    }
    return out;
}

ParsedTrainConfig load_train_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_train_config_text(buf.str());
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

ConfigMap train_config_to_map(ModelKind kind, const TrainConfig& c) {
    ConfigMap m;
    m["model"] = kind_name(kind);
    m["model.norm"] = c.norm == NormOrder::L1 ? "L1" : "L2";
    m["embedding_size"] = std::to_string(c.dim);
    m["training_type"] = training_type_name(c.training_type);
    if (c.training_type == TrainingType::NegSamp) {
        m["negsamp.neg_subjects"] = std::to_string(c.neg_subjects);
        m["negsamp.neg_objects"] = std::to_string(c.neg_objects);
    }
    m["max_epochs"] = std::to_string(c.max_epochs);
    m["reciprocal"] = c.reciprocal ? "true" : "false";
    m["loss"] = "CE";
    m["optimizer"] = optimizer_name(c.optimizer);
    m["optimizer.batch_size"] = std::to_string(c.batch_size);
    m["optimizer.learning_rate"] = fmt(c.learning_rate);
    m["optimizer.scheduler_patience"] = std::to_string(c.scheduler_patience);
    m["regularizer"] = regularizer_name(c.regularizer.type);
    if (c.regularizer.type != RegularizerType::None) {
        m["regularizer.entity_weight"] = fmt(c.regularizer.entity_weight);
        m["regularizer.relation_weight"] = fmt(c.regularizer.relation_weight);
    }
    m["regularizer.frequency_weighting"] = c.regularizer.frequency_weighting ? "true" : "false";
    m["dropout.entity_embedding"] = fmt(c.dropout_entity);
    m["dropout.relation_embedding"] = fmt(c.dropout_relation);
    m["init"] = init_family_name(c.init.family);
    if (c.init.family == InitSpec::Family::Normal) m["init.normal_std"] = fmt(c.init.normal_std);
    if (c.init.family == InitSpec::Family::Uniform)
        m["init.uniform_lower_bound"] = fmt(c.init.uniform_lower);
    m["seed"] = std::to_string(c.seed);
    m["workers"] = std::to_string(c.workers);
    m["early_stop_checks"] = std::to_string(c.early_stop_checks);
    return m;
}

ParsedTrainConfig load_preset(const std::string& name) {
    const auto& presets = preset_texts();
    auto it = presets.find(name);
    if (it == presets.end()) {
        std::string known;
        for (const auto& [k, v] : presets) known += (known.empty() ? "" : ", ") + k;
        throw ConfigError("unknown preset: " + name + " (known: " + known + ")");
    }
    return load_train_config_text(it->second);
}

}  // namespace kge
