#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kge/model.hpp"
#include "kge/optimizer.hpp"
#include "kge/splits.hpp"
#include "kge/triple_store.hpp"

namespace kge {

enum class TrainingType { OneVsAll, NegSamp };

TrainingType training_type_from_name(std::string_view name);
const char* training_type_name(TrainingType t);

enum class RegularizerType { None, L1, F2, N3 };

RegularizerType regularizer_from_name(std::string_view name);
const char* regularizer_name(RegularizerType t);

struct RegularizerSpec {
    RegularizerType type = RegularizerType::None;
    double entity_weight = 0;
    double relation_weight = 0;
    bool frequency_weighting = false;
};

struct TrainConfig {
    int dim = 128;
    TrainingType training_type = TrainingType::OneVsAll;
    int neg_subjects = 1;  // NegSamp only
    int neg_objects = 1;   // NegSamp only
    int max_epochs = 200;
    bool reciprocal = true;
    // loss is fixed: softmax cross-entropy
    OptimizerKind optimizer = OptimizerKind::Adagrad;
    int batch_size = 128;
    double learning_rate = 0.1;
    int scheduler_patience = 10;  // validation checks before an LR decay
    RegularizerSpec regularizer;
    double dropout_entity = 0.0;
    double dropout_relation = 0.0;
    InitSpec init;
    NormOrder norm = NormOrder::L2;
    std::uint64_t seed = 0;
    int workers = 1;            // recorded; the training loop is single-threaded
    int early_stop_checks = 10; // non-improving validation checks before halting; 0 = off

    // Throws ConfigError on out-of-range values.
    void validate() const;
};

struct EpochRecord {
    int epoch = 0;
    double loss = 0;
    double lr = 0;
    double wall_ms = 0;
    bool validated = false;
    double valid_mrr = 0;
};

struct TrainReport {
    std::vector<EpochRecord> epochs;
    int best_epoch = 0;
    double best_valid_mrr = -1;
    int validate_every = 5;
    double lr_decay = 0.95;
    int workers = 1;
    bool early_stopped = false;
    std::string warning;
    // Per relation row: {head-prediction terms, tail-prediction terms} that
    // touched its gradient.
    std::vector<std::array<std::uint64_t, 2>> relation_touches;

    void to_jsonl(std::ostream& out) const;
};

// Negative log-softmax of scores[true_index].
double ce_loss(std::span<const double> scores, std::size_t true_index);

// k_s subject-corrupted then k_o object-corrupted copies of the triple, the
// corrupted slot drawn uniformly over all entities. Corruptions are not
// filtered against known positives.
std::vector<Triple> sample_negatives(const Triple& triple, int k_s, int k_o,
                                     std::uint32_t n_entities, std::uint64_t seed);

struct FrequencyTable {
    std::vector<std::uint64_t> entity;    // occurrences as subject or object
    std::vector<std::uint64_t> relation;  // inverse rows mirror their base rows
};

FrequencyTable count_frequencies(const TripleStore& train, std::size_t n_relation_rows);

// L1 / F2 / N3 penalty over the embedding rows touched by the batch triples,
// weighted per spec; with frequency weighting each row's term is scaled by
// (occurrences in batch) / (total train frequency).
double reg_penalty(const ModelParams& params, const RegularizerSpec& spec,
                   std::span<const Triple> batch, const FrequencyTable* freq = nullptr);

// Negative rates are clamped to no-op; positive rate r zeroes coordinates
// independently with probability r and scales survivors by 1/(1-r).
std::vector<double> apply_dropout(std::span<const double> values, double rate,
                                  std::mt19937_64& rng);

struct FitResult {
    ModelParams params;
    TrainReport report;
};

// Optimizes parameters on splits.train under the configured regime; the
// parameters returned are from the best-validation-MRR epoch (final epoch
// when the validation split is empty). Throws NumericError on divergence.
FitResult fit(const SplitSet& splits, ModelKind kind, const TrainConfig& config);

}  // namespace kge
