#include "kge/hpo.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kge/evaluation.hpp"
#include "kge/sobol.hpp"

namespace kge {

namespace {

int snap_choice(double u, int levels) {
    int i = int(u * levels);
    return std::min(i, levels - 1);
}

double log_range(double u, double lo, double hi) {
    return std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
}

int int_range(double u, int lo, int hi) {
    return std::min(lo + int(u * double(hi - lo + 1)), hi);
}

constexpr int kSizes[4] = {128, 256, 512, 1024};

}  // namespace

std::vector<SampledConfig> sample_configs(const SearchSpace& space, int n,
                                          std::uint64_t seed) {
    if (n < 1) throw ConfigError("sample_configs: n must be >= 1");
    SobolSequence sobol(SearchSpace::kDims, seed);
    std::vector<SampledConfig> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        std::vector<double> u = sobol.next();
        SampledConfig sc;
        TrainConfig& c = sc.config;
        c.dim = kSizes[snap_choice(u[0], 4)];
        c.training_type = snap_choice(u[1], 2) == 0 ? TrainingType::NegSamp
                                                    : TrainingType::OneVsAll;
        c.neg_subjects = int_range(u[2], 1, 100);
        c.neg_objects = int_range(u[3], 1, 100);
        c.max_epochs = 200;
        c.reciprocal = snap_choice(u[4], 2) == 0;
        c.optimizer = snap_choice(u[5], 2) == 0 ? OptimizerKind::Adam : OptimizerKind::Adagrad;
        c.batch_size = kSizes[snap_choice(u[6], 4)];
        c.learning_rate = log_range(u[7], 0.0003, 1.0);
        c.scheduler_patience = int_range(u[8], 0, 10);
        switch (snap_choice(u[9], 4)) {
            case 0: c.regularizer.type = RegularizerType::None; break;
            case 1: c.regularizer.type = RegularizerType::L1; break;
            case 2: c.regularizer.type = RegularizerType::F2; break;
            default: c.regularizer.type = RegularizerType::N3; break;
        }
        c.regularizer.entity_weight = log_range(u[10], 1e-20, 1e-1);
        c.regularizer.relation_weight = log_range(u[11], 1e-20, 1e-1);
        c.regularizer.frequency_weighting = snap_choice(u[12], 2) == 1;
        c.dropout_entity = -0.5 + u[13];
        c.dropout_relation = -0.5 + u[14];
        sc.dropout_clamped = (c.dropout_entity < 0 || c.dropout_relation < 0);
        switch (snap_choice(u[15], 4)) {
            case 0: c.init.family = InitSpec::Family::Uniform; break;
            case 1: c.init.family = InitSpec::Family::Normal; break;
            case 2: c.init.family = InitSpec::Family::XavierUniform; break;
            default: c.init.family = InitSpec::Family::XavierNormal; break;
        }
        c.init.normal_std = 1e-5 + u[16] * (1.0 - 1e-5);
        c.init.uniform_lower = -1.0 + u[17] * (1.0 - 1e-5);
        c.seed = seed * 1000003ull + std::uint64_t(i);

        // pinned dimensions: rebuild through the schema with overrides applied
        if (!space.fixed.empty()) {
            ConfigMap full = train_config_to_map(ModelKind::DistMult, c);
            auto fmt = [](double v) {
                std::ostringstream os;
                os.precision(17);
                os << v;
                return os.str();
            };
            full["negsamp.neg_subjects"] = std::to_string(c.neg_subjects);
            full["negsamp.neg_objects"] = std::to_string(c.neg_objects);
            full["regularizer.entity_weight"] = fmt(c.regularizer.entity_weight);
            full["regularizer.relation_weight"] = fmt(c.regularizer.relation_weight);
            full["init.normal_std"] = fmt(c.init.normal_std);
            full["init.uniform_lower_bound"] = fmt(c.init.uniform_lower);
            for (const auto& [key, value] : space.fixed) {
                if (key == "model" || key == "model.norm") continue;  // caller's choice
                full[key] = value;
            }
            ModelKind k2;
            TrainConfig parsed;
            auto issues = validate_config(full, &k2, &parsed);
            if (!issues.empty())
                throw ConfigError("bad fixed search-space value (" + issues.front().key +
                                  "): " + issues.front().message);
            c = parsed;
            c.seed = seed * 1000003ull + std::uint64_t(i);
        }
        out.push_back(std::move(sc));
    }
    return out;
}

void HpoReport::recompute_best() {
    best_trial = -1;
    double best = -1;
    for (const auto& t : trials) {
        if (t.failed) continue;
        if (t.valid_mrr > best) {
            best = t.valid_mrr;
            best_trial = t.index;
        }
    }
}

namespace {

nlohmann::json trial_to_json(const HpoTrial& t, ModelKind kind) {
    nlohmann::json j{{"trial", t.index},
                     {"status", t.failed ? "failed" : "ok"},
                     {"valid_mrr", t.valid_mrr},
                     {"test_mrr", t.test_mrr},
                     {"epochs_run", t.epochs_run},
                     {"best_epoch", t.best_epoch},
                     {"wall_s", t.wall_s},
                     {"dropout_clamped", t.dropout_clamped}};
    if (t.failed) j["error"] = t.error;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : train_config_to_map(kind, t.config)) cfg[k] = v;
    j["config"] = cfg;
    return j;
}

HpoTrial trial_from_json(const nlohmann::json& j) {
    HpoTrial t;
    t.index = j.at("trial").get<int>();
    t.failed = j.at("status").get<std::string>() == "failed";
    if (j.contains("error")) t.error = j["error"].get<std::string>();
    t.valid_mrr = j.value("valid_mrr", -1.0);
    t.test_mrr = j.value("test_mrr", -1.0);
    t.epochs_run = j.value("epochs_run", 0);
    t.best_epoch = j.value("best_epoch", 0);
    t.wall_s = j.value("wall_s", 0.0);
    t.dropout_clamped = j.value("dropout_clamped", false);
    if (j.contains("config")) {
        ConfigMap m;
        for (const auto& [k, v] : j["config"].items()) m[k] = v.get<std::string>();
        ModelKind kind;
        TrainConfig cfg;
        if (validate_config(m, &kind, &cfg).empty()) t.config = cfg;
    }
    return t;
}

}  // namespace

void save_hpo_report(const HpoReport& report, ModelKind kind, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    for (const auto& t : report.trials) out << trial_to_json(t, kind).dump() << "\n";
}

HpoReport load_hpo_report(const std::string& path) {
    HpoReport rep;
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            rep.trials.push_back(trial_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("bad trial record in " + path + ": " + e.what());
        }
    }
    rep.recompute_best();
    return rep;
}

HpoReport run_hpo(const SplitSet& splits, ModelKind kind, const SearchSpace& space, int n,
                  std::uint64_t seed, const std::string& report_path) {
    HpoReport report;
    std::vector<char> done(n, 0);
    if (!report_path.empty() && std::filesystem::exists(report_path)) {
        report = load_hpo_report(report_path);
        for (const auto& t : report.trials)
            if (t.index >= 0 && t.index < n) done[t.index] = 1;
    }

    auto samples = sample_configs(space, n, seed);
    std::ofstream append;
    if (!report_path.empty()) {
        append.open(report_path, std::ios::app);
        if (!append) throw Error("cannot open for append: " + report_path);
    }

    for (int i = 0; i < n; ++i) {
        if (done[i]) continue;
        HpoTrial trial;
        trial.index = i;
        trial.config = samples[i].config;
        trial.dropout_clamped = samples[i].dropout_clamped;
        auto t0 = std::chrono::steady_clock::now();
        try {
            FitResult res = fit(splits, kind, trial.config);
            trial.valid_mrr = res.report.best_valid_mrr;
            trial.best_epoch = res.report.best_epoch;
            trial.epochs_run = int(res.report.epochs.size());
            if (!splits.test.empty())
                trial.test_mrr = evaluate_lp(res.params, splits.test, splits).mrr;
        } catch (const Error& e) {
            trial.failed = true;
            trial.error = e.what();
        }
        trial.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                           .count();
        report.trials.push_back(trial);
        if (append) {
            append << trial_to_json(trial, kind).dump() << "\n";
            append.flush();
        }
    }
    report.recompute_best();
    return report;
}

}  // namespace kge
