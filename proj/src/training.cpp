#include "kge/training.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "json.hpp"
#include "kge/evaluation.hpp"

namespace kge {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

TrainingType training_type_from_name(std::string_view name) {
    const std::string n = lower(name);
    if (n == "1vsall") return TrainingType::OneVsAll;
    if (n == "negsamp") return TrainingType::NegSamp;
    throw ConfigError("unknown training type: " + std::string(name));
}

const char* training_type_name(TrainingType t) {
    return t == TrainingType::OneVsAll ? "1vsAll" : "NegSamp";
}

RegularizerType regularizer_from_name(std::string_view name) {
    const std::string n = lower(name);
    if (n == "none") return RegularizerType::None;
    if (n == "l1") return RegularizerType::L1;
    if (n == "f2") return RegularizerType::F2;
    if (n == "n3") return RegularizerType::N3;
    throw ConfigError("unknown regularizer: " + std::string(name));
}

const char* regularizer_name(RegularizerType t) {
    switch (t) {
        case RegularizerType::None: return "None";
        case RegularizerType::L1: return "L1";
        case RegularizerType::F2: return "F2";
        case RegularizerType::N3: return "N3";
    }
    return "?";
}

void TrainConfig::validate() const {
    if (dim < 1) throw ConfigError("embedding_size: must be >= 1");
    if (training_type == TrainingType::NegSamp) {
        if (neg_subjects < 1 || neg_subjects > 100)
            throw ConfigError("negsamp.neg_subjects: must be in [1, 100]");
        if (neg_objects < 1 || neg_objects > 100)
            throw ConfigError("negsamp.neg_objects: must be in [1, 100]");
    }
    if (max_epochs < 1) throw ConfigError("max_epochs: must be >= 1");
    if (batch_size < 1) throw ConfigError("optimizer.batch_size: must be >= 1");
    if (learning_rate < 0.0003 || learning_rate > 1.0)
        throw ConfigError("optimizer.learning_rate: must be in [0.0003, 1.0]");
    if (scheduler_patience < 0 || scheduler_patience > 10)
        throw ConfigError("optimizer.scheduler_patience: must be in [0, 10]");
    if (regularizer.type != RegularizerType::None) {
        if (regularizer.entity_weight < 1e-20 || regularizer.entity_weight > 1e-1)
            throw ConfigError("regularizer.entity_weight: must be in [1e-20, 1e-1]");
        if (regularizer.relation_weight < 1e-20 || regularizer.relation_weight > 1e-1)
            throw ConfigError("regularizer.relation_weight: must be in [1e-20, 1e-1]");
    }
    if (dropout_entity < -0.5 || dropout_entity > 0.5)
        throw ConfigError("dropout.entity_embedding: must be in [-0.5, 0.5]");
    if (dropout_relation < -0.5 || dropout_relation > 0.5)
        throw ConfigError("dropout.relation_embedding: must be in [-0.5, 0.5]");
    if (init.family == InitSpec::Family::Normal &&
        (init.normal_std < 1e-5 || init.normal_std > 1.0))
        throw ConfigError("init.normal_std: must be in [0.00001, 1.0]");
    if (init.family == InitSpec::Family::Uniform &&
        (init.uniform_lower < -1.0 || init.uniform_lower > -1e-5))
        throw ConfigError("init.uniform_lower_bound: must be in [-1.0, -0.00001]");
    if (workers < 1) throw ConfigError("workers: must be >= 1");
    if (early_stop_checks < 0) throw ConfigError("early_stop_checks: must be >= 0");
}

double ce_loss(std::span<const double> scores, std::size_t true_index) {
    if (scores.empty()) throw ConfigError("ce_loss: empty score vector");
    if (true_index >= scores.size()) throw ConfigError("ce_loss: true index out of range");
    double m = scores[0];
    for (double v : scores) {
        if (!std::isfinite(v)) throw NumericError("ce_loss: non-finite score");
        m = std::max(m, v);
    }
    double sum = 0;
    for (double v : scores) sum += std::exp(v - m);
    return std::log(sum) - (scores[true_index] - m);
}

std::vector<Triple> sample_negatives(const Triple& triple, int k_s, int k_o,
                                     std::uint32_t n_entities, std::uint64_t seed) {
    if (n_entities < 2) throw ConfigError("negative sampling needs at least 2 entities");
    if (k_s < 1 || k_s > 100 || k_o < 1 || k_o > 100)
        throw ConfigError("negative counts must be in [1, 100]");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, n_entities - 1);
    std::vector<Triple> out;
    out.reserve(std::size_t(k_s) + k_o);
    for (int i = 0; i < k_s; ++i) out.push_back({pick(rng), triple.p, triple.o});
    for (int i = 0; i < k_o; ++i) out.push_back({triple.s, triple.p, pick(rng)});
    return out;
}

FrequencyTable count_frequencies(const TripleStore& train, std::size_t n_relation_rows) {
    FrequencyTable f;
    f.entity.assign(train.num_entities(), 0);
    f.relation.assign(n_relation_rows, 0);
    const std::size_t base = train.num_relations();
    for (const Triple& t : train.triples()) {
        f.entity[t.s]++;
        f.entity[t.o]++;
        f.relation[t.p]++;
        if (std::size_t(t.p) + base < n_relation_rows) f.relation[t.p + base]++;
    }
    return f;
}

namespace {

double reg_term(std::span<const double> row, RegularizerType type) {
    double acc = 0;
    switch (type) {
        case RegularizerType::L1:
            for (double x : row) acc += std::abs(x);
            break;
        case RegularizerType::F2:
            for (double x : row) acc += x * x;
            break;
        case RegularizerType::N3:
            for (double x : row) acc += std::abs(x) * std::abs(x) * std::abs(x);
            break;
        case RegularizerType::None:
            break;
    }
    return acc;
}

void reg_term_grad(std::span<const double> row, RegularizerType type, double scale,
                   std::span<double> out) {
    switch (type) {
        case RegularizerType::L1:
            for (std::size_t i = 0; i < row.size(); ++i)
                out[i] += scale * (row[i] > 0 ? 1.0 : (row[i] < 0 ? -1.0 : 0.0));
            break;
        case RegularizerType::F2:
            for (std::size_t i = 0; i < row.size(); ++i) out[i] += scale * 2.0 * row[i];
            break;
        case RegularizerType::N3:
            for (std::size_t i = 0; i < row.size(); ++i)
                out[i] += scale * 3.0 * row[i] * std::abs(row[i]);
            break;
        case RegularizerType::None:
            break;
    }
}

// Rows touched by the batch (triple endpoints and relations, plus inverse
// relation rows under reciprocal training) with occurrence counts.
struct TouchedRows {
    std::unordered_map<EntityId, std::uint32_t> entities;
    std::unordered_map<RelationId, std::uint32_t> relations;
};

TouchedRows touched_rows(const ModelParams& params, std::span<const Triple> batch) {
    TouchedRows t;
    for (const Triple& tr : batch) {
        t.entities[tr.s]++;
        t.entities[tr.o]++;
        t.relations[tr.p]++;
        if (params.reciprocal) t.relations[params.inverse_of(tr.p)]++;
    }
    return t;
}

double freq_multiplier(std::uint32_t in_batch, std::uint64_t total) {
    if (total == 0) return 0.0;
    return double(in_batch) / double(total);
}

}  // namespace

double reg_penalty(const ModelParams& params, const RegularizerSpec& spec,
                   std::span<const Triple> batch, const FrequencyTable* freq) {
    if (spec.type == RegularizerType::None) return 0.0;
    TouchedRows rows = touched_rows(params, batch);
    double total = 0;
    for (const auto& [e, count] : rows.entities) {
        double mult = spec.frequency_weighting && freq
                          ? freq_multiplier(count, freq->entity[e])
                          : 1.0;
        total += spec.entity_weight * mult * reg_term(params.entity_row(e), spec.type);
    }
    for (const auto& [p, count] : rows.relations) {
        double mult = spec.frequency_weighting && freq
                          ? freq_multiplier(count, freq->relation[p])
                          : 1.0;
        total += spec.relation_weight * mult * reg_term(params.relation_row(p), spec.type);
    }
    return total;
}

std::vector<double> apply_dropout(std::span<const double> values, double rate,
                                  std::mt19937_64& rng) {
    std::vector<double> out(values.begin(), values.end());
    if (rate <= 0.0) return out;  // negative rates clamp to no-op
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double keep_scale = 1.0 / (1.0 - rate);
    for (auto& v : out) v = (unif(rng) < rate) ? 0.0 : v * keep_scale;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Dropout mask of multipliers (0 or 1/(1-r)); empty mask means no-op.
std::vector<double> dropout_mask(std::size_t n, double rate, std::mt19937_64& rng) {
    if (rate <= 0.0) return {};
    std::vector<double> mask(n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double keep = 1.0 / (1.0 - rate);
    for (auto& m : mask) m = (unif(rng) < rate) ? 0.0 : keep;
    return mask;
}

std::vector<double> masked_copy(std::span<const double> row, const std::vector<double>& mask) {
    std::vector<double> out(row.begin(), row.end());
    if (mask.empty()) return out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
    return out;
}

void add_masked(std::span<double> dst, std::span<const double> src,
                const std::vector<double>& mask) {
    if (mask.empty()) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    } else {
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i] * mask[i];
    }
}

// Softmax cross-entropy over `scores`; writes dL/dscore into weights (scaled
// by `scale`) and returns the loss.
double ce_backward(std::span<const double> scores, std::size_t true_index, double scale,
                   std::span<double> weights) {
    double m = scores[0];
    for (double v : scores) {
        if (!std::isfinite(v)) throw NumericError("training diverged: non-finite score");
        m = std::max(m, v);
    }
    double sum = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        weights[i] = std::exp(scores[i] - m);
        sum += weights[i];
    }
    for (std::size_t i = 0; i < scores.size(); ++i) weights[i] = weights[i] / sum * scale;
    weights[true_index] -= scale;
    return std::log(sum) - (scores[true_index] - m);
}

struct TermCounters {
    std::vector<std::array<std::uint64_t, 2>>* touches = nullptr;  // [head, tail]
    void head(RelationId p) { if (touches) (*touches)[p][0]++; }
    void tail(RelationId p) { if (touches) (*touches)[p][1]++; }
};

// One training term: CE over candidates for a (anchor, relation) query.
// direction_head selects the head-prediction form.
class TermProcessor {
public:
    TermProcessor(ModelParams& params, GradSink& sink, std::mt19937_64& rng,
                  const TrainConfig& cfg)
        : params_(params), sink_(sink), rng_(rng), cfg_(cfg),
          scores_(params.n_entities), weights_(params.n_entities) {}

    // Tail term (anchor = subject, truth = object) or reciprocal head term
    // (anchor = object under p_inv, truth = subject): both are object sweeps.
    double tail_form_1vsall(EntityId anchor, RelationId p, EntityId truth, double scale) {
        auto e_mask = dropout_mask(params_.entity_width(), cfg_.dropout_entity, rng_);
        auto r_mask = dropout_mask(params_.relation_width(), cfg_.dropout_relation, rng_);
        auto avec = masked_copy(params_.entity_row(anchor), e_mask);
        auto pvec = masked_copy(params_.relation_row(p), r_mask);
        QueryState qs = query_forward(params_, avec, pvec, p);
        query_scores_all(params_, qs, scores_);
        double loss = ce_backward(scores_, truth, scale, weights_);
        QueryBackward bw = query_backward_all(params_, qs, weights_, sink_);
        push_anchor_grads(anchor, p, bw, e_mask, r_mask);
        return loss;
    }

    // Head term without reciprocal relations: subject sweep under p.
    double head_form_1vsall(EntityId anchor_obj, RelationId p, EntityId truth, double scale) {
        auto e_mask = dropout_mask(params_.entity_width(), cfg_.dropout_entity, rng_);
        auto r_mask = dropout_mask(params_.relation_width(), cfg_.dropout_relation, rng_);
        auto avec = masked_copy(params_.entity_row(anchor_obj), e_mask);
        auto pvec = masked_copy(params_.relation_row(p), r_mask);
        if (params_.kind == ModelKind::ConvE) {
            all_ids();
            conve_subject_scores(params_, avec, pvec, p, all_ids_, scores_);
            double loss = ce_backward(scores_, truth, scale, weights_);
            QueryBackward bw =
                conve_subject_backward(params_, avec, pvec, p, all_ids_, weights_, sink_);
            push_anchor_grads(anchor_obj, p, bw, e_mask, r_mask);
            return loss;
        }
        QueryState qs = subject_query_forward(params_, avec, pvec, p);
        query_scores_all(params_, qs, scores_);
        double loss = ce_backward(scores_, truth, scale, weights_);
        QueryBackward bw = query_backward_all(params_, qs, weights_, sink_);
        push_anchor_grads(anchor_obj, p, bw, e_mask, r_mask);
        return loss;
    }

    // NegSamp terms: CE over {truth, corrupted candidates}.
    double tail_form_negsamp(EntityId anchor, RelationId p, EntityId truth,
                             std::span<const EntityId> candidates, double scale) {
        auto e_mask = dropout_mask(params_.entity_width(), cfg_.dropout_entity, rng_);
        auto r_mask = dropout_mask(params_.relation_width(), cfg_.dropout_relation, rng_);
        auto avec = masked_copy(params_.entity_row(anchor), e_mask);
        auto pvec = masked_copy(params_.relation_row(p), r_mask);
        QueryState qs = query_forward(params_, avec, pvec, p);
        return negsamp_common(qs, anchor, p, truth, candidates, scale, e_mask, r_mask, false);
    }

    double head_form_negsamp(EntityId anchor_obj, RelationId p, EntityId truth,
                             std::span<const EntityId> candidates, double scale) {
        auto e_mask = dropout_mask(params_.entity_width(), cfg_.dropout_entity, rng_);
        auto r_mask = dropout_mask(params_.relation_width(), cfg_.dropout_relation, rng_);
        auto avec = masked_copy(params_.entity_row(anchor_obj), e_mask);
        auto pvec = masked_copy(params_.relation_row(p), r_mask);
        if (params_.kind == ModelKind::ConvE) {
            std::vector<double> cscores(candidates.size()), cweights(candidates.size());
            conve_subject_scores(params_, avec, pvec, p, candidates, cscores);
            double loss = ce_backward(cscores, 0, scale, cweights);
            QueryBackward bw =
                conve_subject_backward(params_, avec, pvec, p, candidates, cweights, sink_);
            push_anchor_grads(anchor_obj, p, bw, e_mask, r_mask);
            return loss;
        }
        QueryState qs = subject_query_forward(params_, avec, pvec, p);
        return negsamp_common(qs, anchor_obj, p, truth, candidates, scale, e_mask, r_mask, true);
    }

private:
    double negsamp_common(QueryState& qs, EntityId anchor, RelationId p, EntityId truth,
                          std::span<const EntityId> candidates, double scale,
                          const std::vector<double>& e_mask, const std::vector<double>& r_mask,
                          bool subject_side) {
        (void)truth;  // truth is candidates[0] by construction
        std::vector<double> cscores(candidates.size()), cweights(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i)
            cscores[i] = query_score(params_, qs, candidates[i]);
        double loss = ce_backward(cscores, 0, scale, cweights);
        QueryBackward bw = query_backward(params_, qs, candidates, cweights, sink_);
        (void)subject_side;
        push_anchor_grads(anchor, p, bw, e_mask, r_mask);
        return loss;
    }

    void push_anchor_grads(EntityId anchor, RelationId p, const QueryBackward& bw,
                           const std::vector<double>& e_mask,
                           const std::vector<double>& r_mask) {
        sink_.mark_entity(anchor);
        add_masked(sink_.entity_row(anchor), bw.d_avec, e_mask);
        sink_.mark_relation(p);
        add_masked(sink_.relation_row(p), bw.d_pvec, r_mask);
        if (!bw.d_normal.empty()) {
            auto nrow = sink_.normal_row(p);
            for (std::size_t i = 0; i < nrow.size(); ++i) nrow[i] += bw.d_normal[i];
        }
    }

    void all_ids() {
        if (all_ids_.size() != params_.n_entities) {
            all_ids_.resize(params_.n_entities);
            for (std::uint32_t i = 0; i < params_.n_entities; ++i) all_ids_[i] = i;
        }
    }

    ModelParams& params_;
    GradSink& sink_;
    std::mt19937_64& rng_;
    const TrainConfig& cfg_;
    std::vector<double> scores_, weights_;
    std::vector<EntityId> all_ids_;
};

void add_reg_gradients(const ModelParams& params, const RegularizerSpec& spec,
                       std::span<const Triple> batch, const FrequencyTable& freq,
                       GradSink& sink) {
    if (spec.type == RegularizerType::None) return;
    TouchedRows rows = touched_rows(params, batch);
    for (const auto& [e, count] : rows.entities) {
        double mult = spec.frequency_weighting ? freq_multiplier(count, freq.entity[e]) : 1.0;
        sink.mark_entity(e);
        reg_term_grad(params.entity_row(e), spec.type, spec.entity_weight * mult,
                      sink.entity_row(e));
    }
    for (const auto& [p, count] : rows.relations) {
        double mult = spec.frequency_weighting ? freq_multiplier(count, freq.relation[p]) : 1.0;
        sink.mark_relation(p);
        reg_term_grad(params.relation_row(p), spec.type, spec.relation_weight * mult,
                      sink.relation_row(p));
    }
}

}  // namespace

FitResult fit(const SplitSet& splits, ModelKind kind, const TrainConfig& cfg) {
    cfg.validate();
    const TripleStore& train = splits.train;
    if (train.empty()) throw ConfigError("training split is empty");

    const std::uint32_t n_ent = std::uint32_t(train.num_entities());
    const std::uint32_t base_rels = std::uint32_t(train.num_relations());
    const std::uint32_t total_rels = cfg.reciprocal ? 2 * base_rels : base_rels;

    ModelParams params =
        init_params(kind, n_ent, total_rels, cfg.dim, cfg.init, cfg.seed, cfg.norm);
    params.base_relations = base_rels;
    params.reciprocal = cfg.reciprocal;

    FrequencyTable freq = count_frequencies(train, total_rels);
    Optimizer opt(cfg.optimizer, params, cfg.learning_rate);
    GradSink sink;
    sink.init(params);

    TrainReport report;
    report.workers = cfg.workers;
    report.relation_touches.assign(total_rels, {0, 0});
    TermCounters counters{&report.relation_touches};

    const bool has_valid = !splits.valid.empty();
    if (!has_valid)
        report.warning = "validation split empty: early stopping and LR scheduling disabled";

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::uint32_t> order(train.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;

    ModelParams best_params = params;
    double best_mrr = -1;
    int best_epoch = 0;
    int non_improving = 0;   // consecutive checks without improvement (early stop)
    int plateau = 0;         // checks since last improvement or decay (scheduler)
    const int decay_after = std::max(cfg.scheduler_patience, 1);

    std::mt19937_64 neg_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<std::uint32_t> pick_entity(0, n_ent - 1);

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        auto t0 = std::chrono::steady_clock::now();
        std::shuffle(order.begin(), order.end(), rng);

        TermProcessor proc(params, sink, rng, cfg);
        double epoch_loss = 0;
        std::size_t n_batches = 0;

        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            sink.clear();
            std::vector<Triple> batch;
            batch.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) batch.push_back(train.triple(order[i]));

            const double scale = 1.0 / double(2 * batch.size());
            double batch_loss = 0;
            for (const Triple& t : batch) {
                if (cfg.training_type == TrainingType::OneVsAll) {
                    batch_loss += scale * proc.tail_form_1vsall(t.s, t.p, t.o, scale);
                    counters.tail(t.p);
                    if (cfg.reciprocal) {
                        RelationId pinv = params.inverse_of(t.p);
                        batch_loss += scale * proc.tail_form_1vsall(t.o, pinv, t.s, scale);
                        counters.head(pinv);
                    } else {
                        batch_loss += scale * proc.head_form_1vsall(t.o, t.p, t.s, scale);
                        counters.head(t.p);
                    }
                } else {
                    std::vector<EntityId> obj_cands{t.o};
                    for (int i = 0; i < cfg.neg_objects; ++i) obj_cands.push_back(pick_entity(neg_rng));
                    std::vector<EntityId> subj_cands{t.s};
                    for (int i = 0; i < cfg.neg_subjects; ++i) subj_cands.push_back(pick_entity(neg_rng));

                    batch_loss += scale * proc.tail_form_negsamp(t.s, t.p, t.o, obj_cands, scale);
                    counters.tail(t.p);
                    if (cfg.reciprocal) {
                        RelationId pinv = params.inverse_of(t.p);
                        batch_loss += scale * proc.tail_form_negsamp(t.o, pinv, t.s, subj_cands, scale);
                        counters.head(pinv);
                    } else {
                        batch_loss += scale * proc.head_form_negsamp(t.o, t.p, t.s, subj_cands, scale);
                        counters.head(t.p);
                    }
                }
            }

            if (cfg.regularizer.type != RegularizerType::None) {
                batch_loss += reg_penalty(params, cfg.regularizer, batch, &freq);
                add_reg_gradients(params, cfg.regularizer, batch, freq, sink);
            }
            if (!std::isfinite(batch_loss))
                throw NumericError("training diverged: non-finite loss at epoch " +
                                   std::to_string(epoch));

            opt.step(params, sink);
            epoch_loss += batch_loss;
            ++n_batches;
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.loss = epoch_loss / double(n_batches);
        rec.lr = opt.learning_rate();
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();

        if (has_valid && epoch % report.validate_every == 0) {
            double mrr = evaluate_lp(params, splits.valid, splits).mrr;
            rec.validated = true;
            rec.valid_mrr = mrr;
            if (mrr > best_mrr) {
                best_mrr = mrr;
                best_epoch = epoch;
                best_params = params;
                non_improving = 0;
                plateau = 0;
            } else {
                ++non_improving;
                ++plateau;
                if (plateau >= decay_after) {
                    opt.set_learning_rate(opt.learning_rate() * report.lr_decay);
                    plateau = 0;
                }
            }
        }
        report.epochs.push_back(rec);

        if (has_valid && cfg.early_stop_checks > 0 && non_improving >= cfg.early_stop_checks) {
            report.early_stopped = true;
            break;
        }
    }

    FitResult result;
    if (has_valid && best_epoch > 0) {
        result.params = std::move(best_params);
        report.best_epoch = best_epoch;
        report.best_valid_mrr = best_mrr;
    } else {
        result.params = std::move(params);
        report.best_epoch = report.epochs.empty() ? 0 : report.epochs.back().epoch;
    }
    result.report = std::move(report);
    return result;
}

void TrainReport::to_jsonl(std::ostream& out) const {
    nlohmann::json meta{{"record", "meta"},
                        {"best_epoch", best_epoch},
                        {"best_valid_mrr", best_valid_mrr},
                        {"validate_every", validate_every},
                        {"lr_decay", lr_decay},
                        {"workers", workers},
                        {"early_stopped", early_stopped}};
    if (!warning.empty()) meta["warning"] = warning;
    out << meta.dump() << "\n";
    for (const auto& e : epochs) {
        nlohmann::json j{{"record", "epoch"},
                         {"epoch", e.epoch},
                         {"loss", e.loss},
                         {"lr", e.lr},
                         {"wall_ms", e.wall_ms}};
        if (e.validated) j["valid_mrr"] = e.valid_mrr;
        out << j.dump() << "\n";
    }
}

}  // namespace kge
