#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kge/config.hpp"
#include "kge/splits.hpp"
#include "kge/training.hpp"

namespace kge {

// Quasi-random search over the full hyperparameter table. Conditional
// parameters (NegSamp counts, regularizer weights) are sampled
// unconditionally and masked, keeping the sequence dimension fixed at 18.
// `fixed` entries pin dimensions to config-dialect values (e.g.
// "training_type" -> "1vsAll") after mapping.
struct SearchSpace {
    ConfigMap fixed;

    static constexpr int kDims = 18;
    static constexpr const char* kGenerator = "sobol-joe-kuo-digital-shift-v1";
};

struct SampledConfig {
    TrainConfig config;
    bool dropout_clamped = false;  // a sampled dropout rate was negative
};

std::vector<SampledConfig> sample_configs(const SearchSpace& space, int n,
                                          std::uint64_t seed);

struct HpoTrial {
    int index = 0;
    bool failed = false;
    std::string error;
    TrainConfig config;
    bool dropout_clamped = false;
    double valid_mrr = -1;
    double test_mrr = -1;  // recorded only; never used for selection
    int epochs_run = 0;
    int best_epoch = 0;
    double wall_s = 0;
};

struct HpoReport {
    std::vector<HpoTrial> trials;
    int best_trial = -1;  // argmax of valid MRR over non-failed trials
    std::string generator = SearchSpace::kGenerator;

    void recompute_best();
};

// Runs fit() per sampled trial; a diverged trial is marked failed and the
// search continues. When report_path names an existing JSONL report, finished
// trials are loaded and skipped (resume).
HpoReport run_hpo(const SplitSet& splits, ModelKind kind, const SearchSpace& space, int n,
                  std::uint64_t seed, const std::string& report_path = "");

void save_hpo_report(const HpoReport& report, ModelKind kind, const std::string& path);
HpoReport load_hpo_report(const std::string& path);

}  // namespace kge
