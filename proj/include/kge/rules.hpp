#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "kge/evaluation.hpp"
#include "kge/splits.hpp"
#include "kge/triple_store.hpp"

namespace kge {

// A term is a shared variable (X, Y, Z, ...) or an entity constant.
struct Term {
    bool is_var = false;
    std::uint32_t id = 0;  // variable index or entity id

    bool operator==(const Term&) const = default;
};

inline Term var(std::uint32_t v) { return {true, v}; }
inline Term constant(EntityId e) { return {false, e}; }

struct Atom {
    RelationId rel = 0;
    Term s, o;

    bool operator==(const Atom&) const = default;
};

struct Rule {
    Atom head;
    std::vector<Atom> body;  // chained by shared variables, length <= max_len
    std::uint64_t support = 0;
    std::uint64_t body_count = 0;
    double confidence = 0;

    bool operator==(const Rule& other) const {
        return head == other.head && body == other.body;
    }
    std::string signature() const;  // canonical text form (no statistics)
};

struct RuleScore {
    std::uint64_t support = 0;
    std::uint64_t body_count = 0;
    double confidence = 0;
};

struct GroundPath {
    std::vector<Triple> triples;  // triples[0] is the head grounding
    // Node chain of the body walk: nodes[0] is the pivot (an endpoint of the
    // head triple), nodes[i] the frontier after body triple i.
    std::vector<EntityId> nodes;
    bool pivot_is_subject = true;  // pivot == triples[0].s
};

// Uniform start triple, then up to max_len - 1 uniformly sampled incident
// extensions from a random endpoint. An isolated triple yields a length-1
// path.
GroundPath sample_ground_path(const TripleStore& store, int max_len, std::mt19937_64& rng);

// Bottom-up generalization of a ground path into candidate rules: the cyclic
// fully-variable rule when the walk closes back on the head, constant-tail
// rules, dangling-variable variants, and for single-triple paths the
// variable-subject / variable-object forms. Duplicates removed.
std::vector<Rule> generalize(const GroundPath& path);

// body_count = groundings (complete assignments of the body variables)
// satisfied on train; support = groundings whose head instantiation is a
// training triple. Returns nullopt when body_count = 0 (no confidence).
std::optional<RuleScore> score_rule(const Rule& rule, const TripleStore& train);

struct RuleLearnOptions {
    double time_budget_s = 10;
    int max_len = 2;            // body atoms, in [1, 4]
    double support_threshold = 1;  // minimum support count to retain a rule
    double min_confidence = 0;     // optional extra filter
    int workers = 1;
    std::uint64_t seed = 0;
};

struct RuleBase {
    std::vector<Rule> rules;
    std::unordered_map<RelationId, std::vector<std::uint32_t>> by_head_relation;
    RuleLearnOptions options;
    double elapsed_s = 0;
    std::uint64_t paths_sampled = 0;

    void index();
    void save(std::ostream& out, const TripleStore& vocab_source) const;
    static RuleBase load(std::istream& in, const TripleStore& vocab_source);
};

// Anytime learner: samples paths, generalizes, scores, retains rules meeting
// the thresholds until the wall-clock budget expires. Path sampling and
// generalization run on `workers` threads; scoring and retention are
// serialized. Results under workers > 1 are budget-dependent, not
// bit-reproducible.
RuleBase learn_rules(const TripleStore& train, const RuleLearnOptions& options);

// Candidates for (s, p, ?) or (?, p, o). Each candidate's score is the
// maximum confidence among firing rules; ties are broken by comparing the
// descending sequence of all firing confidences lexicographically.
struct RulePrediction {
    EntityId entity;
    std::vector<double> confidences;  // descending
};

std::vector<RulePrediction> predict(const RuleBase& rules, QueryDirection dir,
                                    EntityId anchor, RelationId p, const TripleStore& train);

// Filtered evaluation where direction-queries whose true entity is never
// generated contribute 0 to both MRR and HITS; report.coverage records the
// generated fraction.
EvalReport evaluate_rules(const RuleBase& rules, const TripleStore& test,
                          const SplitSet& splits, const std::vector<int>& ks = {1, 3, 10});

}  // namespace kge
