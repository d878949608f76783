#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kge/model.hpp"
#include "kge/splits.hpp"
#include "kge/triple_store.hpp"

namespace kge {

enum class QueryDirection { Head, Tail };

struct RankRecord {
    Triple triple;
    QueryDirection direction;
    double rank = 0;  // mean rank under ties; fractional only with ties
    std::size_t candidate_count = 0;
};

struct MetricBlock {
    double mrr = 0;
    std::map<int, double> hits;
    std::size_t n = 0;  // direction-queries accumulated
};

struct EvalReport {
    double mrr = 0;
    std::map<int, double> hits;  // k -> HITS@k
    std::map<std::string, MetricBlock> per_relation;
    MetricBlock head;
    MetricBlock tail;
    std::size_t n_test = 0;
    // Rule-based evaluation only: fraction of direction-queries whose true
    // entity was generated at all.
    double coverage = -1;

    std::string to_json(int indent = 2) const;
    // Plot data: per-relation train frequency vs metrics.
    void to_csv(std::ostream& out, const TripleStore& train) const;
};

// Entities allowed in the filtered ranking for one direction-query: everything
// except entities forming a known triple in any split; the true answer is
// always retained. Tail queries fix (anchor, p, ?), head queries (?, p, anchor).
std::vector<char> filtered_candidate_mask(QueryDirection dir, EntityId anchor, RelationId p,
                                          EntityId truth, const SplitSet& splits);
std::vector<EntityId> filtered_candidates(QueryDirection dir, EntityId anchor, RelationId p,
                                          EntityId truth, const SplitSet& splits);

// Mean-rank tie rule: 1 + #{strictly greater} + #{equal, excluding self}/2.
double filtered_rank(std::span<const double> scores, std::size_t true_index);
// Masked form over a full score row; entries with mask 0 are excluded.
double filtered_rank_masked(std::span<const double> scores, std::span<const char> permitted,
                            EntityId truth);

// Filtered MRR / HITS@k over both query directions, averaged per Appendix-A
// style 1/(2|test|) normalization. Head queries go through reciprocal
// relations when the model carries them.
EvalReport evaluate_lp(const ModelParams& params, const TripleStore& test,
                       const SplitSet& splits, const std::vector<int>& ks = {1, 3, 10},
                       std::vector<RankRecord>* records = nullptr);

// ---------------------------------------------------------------------------

struct PrPoint {
    double recall = 0;
    double precision = 0;
};

struct ClassificationReport {
    double auroc = 0;
    double auprc = 0;  // step-wise interpolated area, macro over classes
    double map = 0;    // macro mean average precision
    std::vector<std::vector<PrPoint>> pr_curves;  // per class
    std::vector<int> classes_evaluated;

    std::string to_json(int indent = 2) const;
};

// One-vs-rest curves per class, macro-averaged. `probs` rows must sum to 1
// within 1e-6; labels must contain at least two distinct classes.
ClassificationReport classification_metrics(const std::vector<std::vector<double>>& probs,
                                            std::span<const int> labels);

}  // namespace kge
