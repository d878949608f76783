#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kge/common.hpp"

namespace kge {

enum class ModelKind { TransE, TransH, RotatE, DistMult, ComplEx, ConvE };

enum class NormOrder { L1, L2 };

const char* kind_name(ModelKind kind);
ModelKind kind_from_name(std::string_view name);

// RotatE and ComplEx embed in C^d; entity rows store 2d reals interleaved
// as (re, im) pairs. All other models embed in R^d.
bool complex_domain(ModelKind kind);
int entity_width(ModelKind kind, int dim);
int relation_width(ModelKind kind, int dim);

struct InitSpec {
    enum class Family { Uniform, Normal, XavierUniform, XavierNormal };
    Family family = Family::Normal;
    double normal_std = 0.1;      // Normal: mean fixed at 0
    double uniform_lower = -0.1;  // Uniform: upper bound is -lower
    // Xavier gains are fixed at 1.0.
};

InitSpec::Family init_family_from_name(std::string_view name);
const char* init_family_name(InitSpec::Family family);

// ConvE architecture: [e_s; r_p] reshaped to a (2*rows, cols) image,
// rows = largest divisor of d that is <= sqrt(d); 32 filters of 3x3,
// stride 1, zero padding "same"; g = ReLU; a linear map back to d;
// no batch normalization, no bias terms.
struct ConvESpec {
    int rows = 0;
    int cols = 0;
    int n_filters = 32;
    int kernel = 3;

    int image_rows() const { return 2 * rows; }
    int image_size() const { return image_rows() * cols; }
    int feat_size() const { return n_filters * image_size(); }
};

ConvESpec conve_shape_for(int dim);

struct ModelParams {
    ModelKind kind = ModelKind::DistMult;
    NormOrder norm = NormOrder::L2;
    std::uint32_t n_entities = 0;
    std::uint32_t n_relations = 0;    // rows in relation_table (doubled under reciprocal)
    std::uint32_t base_relations = 0; // relation count before reciprocal doubling
    bool reciprocal = false;
    int dim = 0;

    std::vector<double> entity_table;    // n_entities x entity_width
    std::vector<double> relation_table;  // n_relations x relation_width
    std::vector<double> transh_normals;  // TransH: n_relations x dim, unit rows
    std::vector<double> conve_filter;    // ConvE: n_filters x kernel x kernel
    std::vector<double> conve_proj;      // ConvE: feat_size x dim, row-major
    ConvESpec conve;

    int entity_width() const { return kge::entity_width(kind, dim); }
    int relation_width() const { return kge::relation_width(kind, dim); }
    RelationId inverse_of(RelationId p) const { return p + base_relations; }

    std::span<double> entity_row(EntityId e);
    std::span<const double> entity_row(EntityId e) const;
    std::span<double> relation_row(RelationId p);
    std::span<const double> relation_row(RelationId p) const;
    std::span<double> normal_row(RelationId p);
    std::span<const double> normal_row(RelationId p) const;

    void check_entity(EntityId e) const;
    void check_relation(RelationId p) const;
};

// Deterministic for a fixed seed. Xavier bounds use fan_in = fan_out = dim
// for the embedding tables. Complex-domain models require even d.
ModelParams init_params(ModelKind kind, std::uint32_t n_entities, std::uint32_t n_relations,
                        int dim, const InitSpec& spec, std::uint64_t seed,
                        NormOrder norm = NormOrder::L2);

double score(const ModelParams& params, EntityId s, RelationId p, EntityId o);

// Full-row sweeps; out must have size n_entities. Head queries on reciprocal
// models should instead sweep objects under inverse_of(p).
void score_all_objects(const ModelParams& params, EntityId s, RelationId p,
                       std::span<double> out);
void score_all_subjects(const ModelParams& params, RelationId p, EntityId o,
                        std::span<double> out);

struct ScoreGradients {
    std::vector<double> d_subject;   // entity_width
    std::vector<double> d_relation;  // relation_width
    std::vector<double> d_object;    // entity_width
    std::vector<double> d_normal;    // TransH: dim
    std::vector<double> d_filter;    // ConvE
    std::vector<double> d_proj;      // ConvE
    // True when a norm hit an exactly-zero residual or |.| kink; subgradient 0
    // is used there.
    bool nondifferentiable = false;
    // Distance to the nearest non-smooth point (kinks of |.| and ReLU);
    // +inf for smooth scores. Finite-difference probes are unreliable when
    // this is of the order of the probe step.
    double kink_distance = std::numeric_limits<double>::infinity();
};

ScoreGradients score_gradients(const ModelParams& params, EntityId s, RelationId p,
                               EntityId o);

// ---------------------------------------------------------------------------
// Trainer-facing kernels. A query fixes an anchor entity row and a relation
// row (possibly dropout-scaled copies) and scores entity rows as candidates:
// objects for tail queries, subjects for head queries. ConvE has no closed
// head-query form and is handled by the per-candidate helpers below.

struct QueryState {
    RelationId p = 0;
    bool subject_side = false;  // true: anchor is the object, candidates are subjects
    std::vector<double> avec;   // anchor entity row used (copy)
    std::vector<double> pvec;   // relation row used (copy)
    std::vector<double> normal; // TransH normal row (copy)
    std::vector<double> q;      // dot family: score(c) = dot(q, e_c)
    std::vector<double> t;      // distance family: score(c) = -norm(t - T(e_c))
    std::vector<double> cos_theta, sin_theta;  // RotatE
    std::vector<double> conv_pre;  // ConvE pre-ReLU feature maps
    std::vector<double> flat;      // ConvE post-ReLU flattened features
    std::vector<double> z_pre;     // ConvE pre-ReLU projected vector
    double kink = std::numeric_limits<double>::infinity();
};

// Dense gradient buffers with touched-row bookkeeping.
struct GradSink {
    std::vector<double> entity_grad;
    std::vector<double> relation_grad;
    std::vector<double> normal_grad;
    std::vector<double> filter_grad;
    std::vector<double> proj_grad;
    std::vector<std::uint32_t> touched_entities;
    std::vector<std::uint32_t> touched_relations;
    std::vector<char> entity_touched;
    std::vector<char> relation_touched;
    bool conve_touched = false;
    int entity_width_ = 0, relation_width_ = 0, dim_ = 0;

    void init(const ModelParams& params);
    void clear();
    std::span<double> entity_row(EntityId e);
    std::span<double> relation_row(RelationId p);
    std::span<double> normal_row(RelationId p);
    void mark_entity(EntityId e);
    void mark_relation(RelationId p);
};

// Tail query: candidates are objects of (anchor, p, ?).
QueryState query_forward(const ModelParams& params, std::span<const double> svec,
                         std::span<const double> pvec, RelationId p);
// Head query: candidates are subjects of (?, p, anchor). Throws for ConvE.
QueryState subject_query_forward(const ModelParams& params, std::span<const double> ovec,
                                 std::span<const double> pvec, RelationId p);

double query_score(const ModelParams& params, const QueryState& qs, EntityId candidate);
void query_scores_all(const ModelParams& params, const QueryState& qs,
                      std::span<double> out);

// Backward pass of the candidate sweep. weights[j] = dL/dscore_j, either per
// candidate or (all form) per entity row. Candidate-side and global gradients
// go into the sink; gradients w.r.t. the anchor row, relation row, and TransH
// normal are returned.
struct QueryBackward {
    std::vector<double> d_avec;
    std::vector<double> d_pvec;
    std::vector<double> d_normal;  // TransH only
    bool nondifferentiable = false;
    double kink_distance = std::numeric_limits<double>::infinity();
};

QueryBackward query_backward(const ModelParams& params, const QueryState& qs,
                             std::span<const EntityId> candidates,
                             std::span<const double> weights, GradSink& sink);
QueryBackward query_backward_all(const ModelParams& params, const QueryState& qs,
                                 std::span<const double> weights, GradSink& sink);

// ConvE head queries run one full forward per candidate subject.
void conve_subject_scores(const ModelParams& params, std::span<const double> ovec,
                          std::span<const double> pvec, RelationId p,
                          std::span<const EntityId> candidates, std::span<double> out);
QueryBackward conve_subject_backward(const ModelParams& params, std::span<const double> ovec,
                                     std::span<const double> pvec, RelationId p,
                                     std::span<const EntityId> candidates,
                                     std::span<const double> weights, GradSink& sink);

// Renormalizes every TransH normal row to unit L2 length (no-op otherwise).
void renormalize_transh_normals(ModelParams& params);

}  // namespace kge
