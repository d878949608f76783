#include "kge/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "json.hpp"

namespace kge {

namespace {

void apply_known(std::vector<char>& mask, const TripleStore& store, QueryDirection dir,
                 EntityId anchor, RelationId p) {
    if (dir == QueryDirection::Tail) {
        for (EntityId e : store.objects_of(anchor, p)) mask[e] = 0;
    } else {
        for (EntityId e : store.subjects_of(p, anchor)) mask[e] = 0;
    }
}

}  // namespace

std::vector<char> filtered_candidate_mask(QueryDirection dir, EntityId anchor, RelationId p,
                                          EntityId truth, const SplitSet& splits) {
    std::vector<char> mask(splits.train.num_entities(), 1);
    apply_known(mask, splits.train, dir, anchor, p);
    apply_known(mask, splits.valid, dir, anchor, p);
    apply_known(mask, splits.test, dir, anchor, p);
    mask[truth] = 1;
    return mask;
}

std::vector<EntityId> filtered_candidates(QueryDirection dir, EntityId anchor, RelationId p,
                                          EntityId truth, const SplitSet& splits) {
    auto mask = filtered_candidate_mask(dir, anchor, p, truth, splits);
    std::vector<EntityId> out;
    for (EntityId e = 0; e < mask.size(); ++e)
        if (mask[e]) out.push_back(e);
    return out;
}

double filtered_rank(std::span<const double> scores, std::size_t true_index) {
    if (true_index >= scores.size()) throw Error("true index out of range");
    const double target = scores[true_index];
    if (!std::isfinite(target)) throw NumericError("non-finite score for the true entity");
    std::size_t greater = 0, equal = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) throw NumericError("non-finite candidate score");
        if (scores[i] > target) ++greater;
        else if (scores[i] == target) ++equal;
    }
    return 1.0 + double(greater) + double(equal - 1) / 2.0;
}

double filtered_rank_masked(std::span<const double> scores, std::span<const char> permitted,
                            EntityId truth) {
    const double target = scores[truth];
    if (!std::isfinite(target)) throw NumericError("non-finite score for the true entity");
    std::size_t greater = 0, equal = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!permitted[i]) continue;
        double v = scores[i];
        if (!std::isfinite(v)) throw NumericError("non-finite candidate score");
        if (v > target) ++greater;
        else if (v == target) ++equal;
    }
    return 1.0 + double(greater) + double(equal - 1) / 2.0;
}

namespace {

void accumulate(MetricBlock& b, double rank, const std::vector<int>& ks) {
    b.mrr += 1.0 / rank;
    for (int k : ks) b.hits[k] += (rank <= double(k)) ? 1.0 : 0.0;
    b.n += 1;
}

void finalize(MetricBlock& b) {
    if (b.n == 0) return;
    b.mrr /= double(b.n);
    for (auto& [k, v] : b.hits) v /= double(b.n);
}

}  // namespace

EvalReport evaluate_lp(const ModelParams& params, const TripleStore& test,
                       const SplitSet& splits, const std::vector<int>& ks,
                       std::vector<RankRecord>* records) {
    EvalReport rep;
    rep.n_test = test.size();
    for (int k : ks) rep.hits[k] = 0;
    for (int k : ks) {
        rep.head.hits[k] = 0;
        rep.tail.hits[k] = 0;
    }

    std::vector<double> scores(params.n_entities);
    double mrr_sum = 0;
    std::map<int, double> hit_sums;
    for (int k : ks) hit_sums[k] = 0;

    for (const Triple& t : test.triples()) {
        // tail direction: (s, p, ?)
        score_all_objects(params, t.s, t.p, scores);
        auto mask = filtered_candidate_mask(QueryDirection::Tail, t.s, t.p, t.o, splits);
        double r_tail = filtered_rank_masked(scores, mask, t.o);
        std::size_t cand_tail = std::count(mask.begin(), mask.end(), char(1));

        // head direction: (?, p, o)
        if (params.reciprocal) {
            score_all_objects(params, t.o, params.inverse_of(t.p), scores);
        } else {
            score_all_subjects(params, t.p, t.o, scores);
        }
        auto hmask = filtered_candidate_mask(QueryDirection::Head, t.o, t.p, t.s, splits);
        double r_head = filtered_rank_masked(scores, hmask, t.s);
        std::size_t cand_head = std::count(hmask.begin(), hmask.end(), char(1));

        mrr_sum += 1.0 / r_tail + 1.0 / r_head;
        for (int k : ks)
            hit_sums[k] += (r_tail <= double(k) ? 1.0 : 0.0) + (r_head <= double(k) ? 1.0 : 0.0);

        accumulate(rep.tail, r_tail, ks);
        accumulate(rep.head, r_head, ks);
        MetricBlock& pr = rep.per_relation[test.relations().name(t.p)];
        accumulate(pr, r_tail, ks);
        accumulate(pr, r_head, ks);

        if (records) {
            records->push_back({t, QueryDirection::Tail, r_tail, cand_tail});
            records->push_back({t, QueryDirection::Head, r_head, cand_head});
        }
    }

    const double denom = 2.0 * double(test.size());
    if (test.size() > 0) {
        rep.mrr = mrr_sum / denom;
        for (int k : ks) rep.hits[k] = hit_sums[k] / denom;
    }
    finalize(rep.head);
    finalize(rep.tail);
    for (auto& [name, block] : rep.per_relation) finalize(block);
    return rep;
}

namespace {

nlohmann::json block_json(const MetricBlock& b) {
    nlohmann::json hits;
    for (const auto& [k, v] : b.hits) hits[std::to_string(k)] = v;
    return {{"mrr", b.mrr}, {"hits", hits}, {"n", b.n}};
}

}  // namespace

std::string EvalReport::to_json(int indent) const {
    nlohmann::json hits_j;
    for (const auto& [k, v] : hits) hits_j[std::to_string(k)] = v;
    nlohmann::json per_rel = nlohmann::json::object();
    for (const auto& [name, block] : per_relation) per_rel[name] = block_json(block);
    nlohmann::json j{{"mrr", mrr},
                     {"hits", hits_j},
                     {"per_relation", per_rel},
                     {"per_direction",
                      {{"head", block_json(head)}, {"tail", block_json(tail)}}},
                     {"n_test", n_test}};
    if (coverage >= 0) j["coverage"] = coverage;
    j["tie_handling"] = "mean-rank";
    return j.dump(indent);
}

void EvalReport::to_csv(std::ostream& out, const TripleStore& train) const {
    out << "relation,train_count,test_queries,mrr";
    for (const auto& [k, v] : hits) out << ",hits" << k;
    out << "\n";
    for (const auto& [name, block] : per_relation) {
        std::size_t train_count = 0;
        if (auto id = train.relations().find(name))
            train_count = train.triples_with_relation(*id).size();
        out << name << ',' << train_count << ',' << block.n << ',' << block.mrr;
        for (const auto& [k, v] : block.hits) out << ',' << v;
        out << "\n";
    }
}

// ---------------------------------------------------------------------------

namespace {

struct BinaryCurves {
    double auroc = 0;
    double ap = 0;  // step-wise PR area
    std::vector<PrPoint> pr;
};

// One-vs-rest curves for one class; scores descending with tie groups.
BinaryCurves binary_curves(std::vector<std::pair<double, int>>& scored, std::size_t n_pos) {
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.first > b.first;
    });
    const std::size_t n = scored.size();
    const std::size_t n_neg = n - n_pos;

    BinaryCurves out;
    out.pr.push_back({0.0, 1.0});
    double auroc = 0, ap = 0;
    double tp = 0, fp = 0, prev_tpr = 0, prev_fpr = 0, prev_rec = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        double group_tp = 0, group_fp = 0;
        while (j < n && scored[j].first == scored[i].first) {
            if (scored[j].second) group_tp += 1;
            else group_fp += 1;
            ++j;
        }
        tp += group_tp;
        fp += group_fp;
        double tpr = n_pos ? tp / double(n_pos) : 0;
        double fpr = n_neg ? fp / double(n_neg) : 0;
        auroc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;  // trapezoid
        double prec = (tp + fp) > 0 ? tp / (tp + fp) : 1.0;
        ap += (tpr - prev_rec) * prec;  // step-wise interpolation
        out.pr.push_back({tpr, prec});
        prev_tpr = tpr;
        prev_fpr = fpr;
        prev_rec = tpr;
        i = j;
    }
    out.auroc = auroc;
    out.ap = ap;
    return out;
}

}  // namespace

ClassificationReport classification_metrics(const std::vector<std::vector<double>>& probs,
                                            std::span<const int> labels) {
    if (probs.size() != labels.size() || probs.empty())
        throw ConfigError("probability rows and labels must align and be nonempty");
    const std::size_t n_classes = probs.front().size();
    for (const auto& row : probs) {
        if (row.size() != n_classes) throw ConfigError("ragged probability rows");
        double sum = std::accumulate(row.begin(), row.end(), 0.0);
        if (!std::isfinite(sum) || std::abs(sum - 1.0) > 1e-6)
            throw NumericError("probability rows must sum to 1");
    }

    std::vector<std::size_t> class_counts(n_classes, 0);
    for (int y : labels) {
        if (y < 0 || std::size_t(y) >= n_classes) throw ConfigError("label out of range");
        class_counts[y]++;
    }
    std::size_t present = 0;
    for (auto c : class_counts) present += (c > 0);
    if (present < 2)
        throw MetricError("undefined metrics: labels contain fewer than two classes");

    ClassificationReport rep;
    double auroc_sum = 0, ap_sum = 0;
    std::size_t used = 0;
    std::vector<std::pair<double, int>> scored(labels.size());
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (class_counts[c] == 0) continue;
        for (std::size_t i = 0; i < labels.size(); ++i)
            scored[i] = {probs[i][c], labels[i] == int(c) ? 1 : 0};
        BinaryCurves curves = binary_curves(scored, class_counts[c]);
        auroc_sum += curves.auroc;
        ap_sum += curves.ap;
        rep.pr_curves.push_back(std::move(curves.pr));
        rep.classes_evaluated.push_back(int(c));
        ++used;
    }
    rep.auroc = auroc_sum / double(used);
    rep.auprc = ap_sum / double(used);
    rep.map = ap_sum / double(used);
    return rep;
}

std::string ClassificationReport::to_json(int indent) const {
    nlohmann::json curves = nlohmann::json::array();
    for (std::size_t i = 0; i < pr_curves.size(); ++i) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : pr_curves[i]) pts.push_back({p.recall, p.precision});
        curves.push_back({{"class", classes_evaluated[i]}, {"points", pts}});
    }
    nlohmann::json j{{"auroc", auroc},
                     {"auprc", auprc},
                     {"map", map},
                     {"auprc_interpolation", "step"},
                     {"pr_curves", curves}};
    return j.dump(indent);
}

}  // namespace kge
