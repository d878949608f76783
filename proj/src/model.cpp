#include "kge/model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

namespace kge {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<const RowMat>;
using MapVec = Eigen::Map<const Eigen::VectorXd>;

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

const char* kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::TransE: return "TransE";
        case ModelKind::TransH: return "TransH";
        case ModelKind::RotatE: return "RotatE";
        case ModelKind::DistMult: return "DistMult";
        case ModelKind::ComplEx: return "ComplEx";
        case ModelKind::ConvE: return "ConvE";
    }
    return "?";
}

ModelKind kind_from_name(std::string_view name) {
    const std::string n = lower(name);
    if (n == "transe") return ModelKind::TransE;
    if (n == "transh") return ModelKind::TransH;
    if (n == "rotate") return ModelKind::RotatE;
    if (n == "distmult") return ModelKind::DistMult;
    if (n == "complex") return ModelKind::ComplEx;
    if (n == "conve") return ModelKind::ConvE;
    throw ConfigError("unknown model kind: " + std::string(name));
}

bool complex_domain(ModelKind kind) {
    return kind == ModelKind::RotatE || kind == ModelKind::ComplEx;
}

int entity_width(ModelKind kind, int dim) {
    return complex_domain(kind) ? 2 * dim : dim;
}

int relation_width(ModelKind kind, int dim) {
    if (kind == ModelKind::ComplEx) return 2 * dim;
    return dim;  // RotatE relations are d phase angles
}

InitSpec::Family init_family_from_name(std::string_view name) {
    const std::string n = lower(name);
    if (n == "uniform") return InitSpec::Family::Uniform;
    if (n == "normal") return InitSpec::Family::Normal;
    if (n == "xavieruniform") return InitSpec::Family::XavierUniform;
    if (n == "xaviernormal") return InitSpec::Family::XavierNormal;
    throw ConfigError("unknown init family: " + std::string(name));
}

const char* init_family_name(InitSpec::Family family) {
    switch (family) {
        case InitSpec::Family::Uniform: return "Uniform";
        case InitSpec::Family::Normal: return "Normal";
        case InitSpec::Family::XavierUniform: return "XavierUniform";
        case InitSpec::Family::XavierNormal: return "XavierNormal";
    }
    return "?";
}

ConvESpec conve_shape_for(int dim) {
    ConvESpec spec;
    int root = static_cast<int>(std::floor(std::sqrt(double(dim))));
    for (int k = root; k >= 1; --k) {
        if (dim % k == 0) {
            spec.rows = k;
            spec.cols = dim / k;
            break;
        }
    }
    return spec;
}

std::span<double> ModelParams::entity_row(EntityId e) {
    const int w = entity_width();
    return {entity_table.data() + std::size_t(e) * w, std::size_t(w)};
}
std::span<const double> ModelParams::entity_row(EntityId e) const {
    const int w = entity_width();
    return {entity_table.data() + std::size_t(e) * w, std::size_t(w)};
}
std::span<double> ModelParams::relation_row(RelationId p) {
    const int w = relation_width();
    return {relation_table.data() + std::size_t(p) * w, std::size_t(w)};
}
std::span<const double> ModelParams::relation_row(RelationId p) const {
    const int w = relation_width();
    return {relation_table.data() + std::size_t(p) * w, std::size_t(w)};
}
std::span<double> ModelParams::normal_row(RelationId p) {
    return {transh_normals.data() + std::size_t(p) * dim, std::size_t(dim)};
}
std::span<const double> ModelParams::normal_row(RelationId p) const {
    return {transh_normals.data() + std::size_t(p) * dim, std::size_t(dim)};
}

void ModelParams::check_entity(EntityId e) const {
    if (e >= n_entities) throw Error("entity id out of range: " + std::to_string(e));
}
void ModelParams::check_relation(RelationId p) const {
    if (p >= n_relations) throw Error("relation id out of range: " + std::to_string(p));
}

namespace {

void fill_values(std::vector<double>& v, const InitSpec& spec, int fan_in, int fan_out,
                 std::mt19937_64& rng) {
    switch (spec.family) {
        case InitSpec::Family::Uniform: {
            std::uniform_real_distribution<double> d(spec.uniform_lower, -spec.uniform_lower);
            for (auto& x : v) x = d(rng);
            break;
        }
        case InitSpec::Family::Normal: {
            std::normal_distribution<double> d(0.0, spec.normal_std);
            for (auto& x : v) x = d(rng);
            break;
        }
        case InitSpec::Family::XavierUniform: {
            double bound = std::sqrt(6.0 / double(fan_in + fan_out));
            std::uniform_real_distribution<double> d(-bound, bound);
            for (auto& x : v) x = d(rng);
            break;
        }
        case InitSpec::Family::XavierNormal: {
            double sd = std::sqrt(2.0 / double(fan_in + fan_out));
            std::normal_distribution<double> d(0.0, sd);
            for (auto& x : v) x = d(rng);
            break;
        }
    }
}

}  // namespace

ModelParams init_params(ModelKind kind, std::uint32_t n_entities, std::uint32_t n_relations,
                        int dim, const InitSpec& spec, std::uint64_t seed, NormOrder norm) {
    if (dim < 1) throw ConfigError("embedding size must be >= 1");
    if (n_entities < 1 || n_relations < 1) throw ConfigError("vocabulary counts must be >= 1");
    if (complex_domain(kind) && dim % 2 != 0)
        throw ConfigError("embedding size must be even for complex-domain models");
    if (spec.family == InitSpec::Family::Normal && spec.normal_std <= 0)
        throw ConfigError("normal std must be > 0");
    if (spec.family == InitSpec::Family::Uniform && spec.uniform_lower >= 0)
        throw ConfigError("uniform lower bound must be < 0");

    ModelParams p;
    p.kind = kind;
    p.norm = norm;
    p.n_entities = n_entities;
    p.n_relations = n_relations;
    p.base_relations = n_relations;
    p.dim = dim;

    std::mt19937_64 rng(seed);
    p.entity_table.resize(std::size_t(n_entities) * p.entity_width());
    fill_values(p.entity_table, spec, dim, dim, rng);
    p.relation_table.resize(std::size_t(n_relations) * p.relation_width());
    fill_values(p.relation_table, spec, dim, dim, rng);

    if (kind == ModelKind::TransH) {
        p.transh_normals.resize(std::size_t(n_relations) * dim);
        fill_values(p.transh_normals, spec, dim, dim, rng);
        renormalize_transh_normals(p);
    }
    if (kind == ModelKind::ConvE) {
        p.conve = conve_shape_for(dim);
        const int k2 = p.conve.kernel * p.conve.kernel;
        p.conve_filter.resize(std::size_t(p.conve.n_filters) * k2);
        fill_values(p.conve_filter, spec, k2, p.conve.n_filters * k2, rng);
        p.conve_proj.resize(std::size_t(p.conve.feat_size()) * dim);
        fill_values(p.conve_proj, spec, p.conve.feat_size(), dim, rng);
    }
    return p;
}

void renormalize_transh_normals(ModelParams& params) {
    if (params.kind != ModelKind::TransH) return;
    for (std::uint32_t r = 0; r < params.n_relations; ++r) {
        auto row = params.normal_row(r);
        double sq = 0;
        for (double x : row) sq += x * x;
        if (sq < 1e-24) continue;
        double inv = 1.0 / std::sqrt(sq);
        for (double& x : row) x *= inv;
    }
}

// ---------------------------------------------------------------------------
// Distance helpers. `u` is the residual; complex_pairs treats consecutive
// (re, im) entries as one coordinate with modulus |z|.

namespace {

struct DistInfo {
    double value = 0;
    bool nondiff = false;
    double kink = std::numeric_limits<double>::infinity();
};

DistInfo dist_value(std::span<const double> u, NormOrder norm, bool complex_pairs) {
    DistInfo info;
    if (norm == NormOrder::L2) {
        double sq = 0;
        for (double x : u) sq += x * x;
        info.value = std::sqrt(sq);
        info.kink = info.value;
        info.nondiff = (info.value == 0.0);
    } else if (!complex_pairs) {
        double sum = 0;
        for (double x : u) {
            double a = std::abs(x);
            sum += a;
            info.kink = std::min(info.kink, a);
            if (x == 0.0) info.nondiff = true;
        }
        info.value = sum;
    } else {
        double sum = 0;
        for (std::size_t k = 0; k + 1 < u.size(); k += 2) {
            double m = std::hypot(u[k], u[k + 1]);
            sum += m;
            info.kink = std::min(info.kink, m);
            if (m == 0.0) info.nondiff = true;
        }
        info.value = sum;
    }
    return info;
}

// n = d(norm)/du with subgradient 0 at kinks.
DistInfo dist_grad(std::span<const double> u, NormOrder norm, bool complex_pairs,
                   std::span<double> n) {
    DistInfo info = dist_value(u, norm, complex_pairs);
    if (norm == NormOrder::L2) {
        if (info.value == 0.0) {
            std::fill(n.begin(), n.end(), 0.0);
        } else {
            double inv = 1.0 / info.value;
            for (std::size_t i = 0; i < u.size(); ++i) n[i] = u[i] * inv;
        }
    } else if (!complex_pairs) {
        for (std::size_t i = 0; i < u.size(); ++i)
            n[i] = (u[i] > 0) ? 1.0 : (u[i] < 0 ? -1.0 : 0.0);
    } else {
        for (std::size_t k = 0; k + 1 < u.size(); k += 2) {
            double m = std::hypot(u[k], u[k + 1]);
            if (m == 0.0) {
                n[k] = n[k + 1] = 0.0;
            } else {
                n[k] = u[k] / m;
                n[k + 1] = u[k + 1] / m;
            }
        }
    }
    return info;
}

// out = x - (w.x) w
void project_out(std::span<const double> w, std::span<const double> x, std::span<double> out) {
    double dot = 0;
    for (std::size_t i = 0; i < w.size(); ++i) dot += w[i] * x[i];
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = x[i] - dot * w[i];
}

// Adjoint of project_out w.r.t. x for upstream v (projection is symmetric).
void project_out_adjoint(std::span<const double> w, std::span<const double> v,
                         std::span<double> out) {
    project_out(w, v, out);
}

// Accumulates d<v, proj_w(x)>/dw = -(v.w) x - (w.x) v into dw.
void project_normal_grad(std::span<const double> w, std::span<const double> x,
                         std::span<const double> v, std::span<double> dw) {
    double vw = 0, wx = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        vw += v[i] * w[i];
        wx += w[i] * x[i];
    }
    for (std::size_t i = 0; i < w.size(); ++i) dw[i] += -vw * x[i] - wx * v[i];
}

void conve_forward(const ModelParams& P, QueryState& qs) {
    const ConvESpec& c = P.conve;
    const int rows = c.image_rows(), cols = c.cols, k = c.kernel, pad = c.kernel / 2;
    const int img = c.image_size();
    const auto& svec = qs.avec;
    const auto& pvec = qs.pvec;
    auto at_img = [&](int i, int j) -> double {
        if (i < 0 || i >= rows || j < 0 || j >= cols) return 0.0;
        int idx = i * cols + j;
        return (i < c.rows) ? svec[idx] : pvec[idx - c.rows * cols];
    };

    qs.conv_pre.assign(std::size_t(c.n_filters) * img, 0.0);
    qs.flat.assign(std::size_t(c.n_filters) * img, 0.0);
    for (int f = 0; f < c.n_filters; ++f) {
        const double* F = P.conve_filter.data() + std::size_t(f) * k * k;
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                double acc = 0;
                for (int di = 0; di < k; ++di)
                    for (int dj = 0; dj < k; ++dj)
                        acc += F[di * k + dj] * at_img(i + di - pad, j + dj - pad);
                std::size_t idx = std::size_t(f) * img + std::size_t(i) * cols + j;
                qs.conv_pre[idx] = acc;
                qs.flat[idx] = acc > 0 ? acc : 0.0;
                qs.kink = std::min(qs.kink, std::abs(acc));
            }
        }
    }

    qs.z_pre.assign(P.dim, 0.0);
    MapMat W(P.conve_proj.data(), c.feat_size(), P.dim);
    MapVec flat(qs.flat.data(), c.feat_size());
    Eigen::Map<Eigen::VectorXd>(qs.z_pre.data(), P.dim).noalias() = W.transpose() * flat;

    qs.q.resize(P.dim);
    for (int i = 0; i < P.dim; ++i) {
        qs.q[i] = qs.z_pre[i] > 0 ? qs.z_pre[i] : 0.0;
        qs.kink = std::min(qs.kink, std::abs(qs.z_pre[i]));
    }
}

// Backward of conve_forward for upstream dL/dq = dh.
void conve_backprop(const ModelParams& P, const QueryState& qs, std::span<const double> dh,
                    std::span<double> d_svec, std::span<double> d_pvec, GradSink& sink) {
    const ConvESpec& c = P.conve;
    const int rows = c.image_rows(), cols = c.cols, k = c.kernel, pad = c.kernel / 2;
    const int img = c.image_size();

    std::vector<double> dz(P.dim);
    for (int i = 0; i < P.dim; ++i) dz[i] = qs.z_pre[i] > 0 ? dh[i] : 0.0;

    Eigen::Map<RowMat> dW(sink.proj_grad.data(), c.feat_size(), P.dim);
    MapMat W(P.conve_proj.data(), c.feat_size(), P.dim);
    MapVec flat(qs.flat.data(), c.feat_size());
    MapVec dzv(dz.data(), P.dim);
    dW.noalias() += flat * dzv.transpose();
    std::vector<double> dflat(c.feat_size());
    Eigen::Map<Eigen::VectorXd>(dflat.data(), c.feat_size()).noalias() = W * dzv;

    const auto& svec = qs.avec;
    const auto& pvec = qs.pvec;
    auto at_img = [&](int i, int j) -> double {
        if (i < 0 || i >= rows || j < 0 || j >= cols) return 0.0;
        int idx = i * cols + j;
        return (i < c.rows) ? svec[idx] : pvec[idx - c.rows * cols];
    };

    for (int f = 0; f < c.n_filters; ++f) {
        double* dF = sink.filter_grad.data() + std::size_t(f) * k * k;
        const double* F = P.conve_filter.data() + std::size_t(f) * k * k;
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                std::size_t idx = std::size_t(f) * img + std::size_t(i) * cols + j;
                if (qs.conv_pre[idx] <= 0) continue;
                double g = dflat[idx];
                if (g == 0) continue;
                for (int di = 0; di < k; ++di) {
                    for (int dj = 0; dj < k; ++dj) {
                        int ii = i + di - pad, jj = j + dj - pad;
                        if (ii < 0 || ii >= rows || jj < 0 || jj >= cols) continue;
                        dF[di * k + dj] += g * at_img(ii, jj);
                        int pix = ii * cols + jj;
                        double gx = g * F[di * k + dj];
                        if (ii < c.rows) d_svec[pix] += gx;
                        else d_pvec[pix - c.rows * cols] += gx;
                    }
                }
            }
        }
    }
    sink.conve_touched = true;
}

}  // namespace

// ---------------------------------------------------------------------------

void GradSink::init(const ModelParams& params) {
    entity_width_ = params.entity_width();
    relation_width_ = params.relation_width();
    dim_ = params.dim;
    entity_grad.assign(params.entity_table.size(), 0.0);
    relation_grad.assign(params.relation_table.size(), 0.0);
    normal_grad.assign(params.transh_normals.size(), 0.0);
    filter_grad.assign(params.conve_filter.size(), 0.0);
    proj_grad.assign(params.conve_proj.size(), 0.0);
    entity_touched.assign(params.n_entities, 0);
    relation_touched.assign(params.n_relations, 0);
    touched_entities.clear();
    touched_relations.clear();
    conve_touched = false;
}

void GradSink::clear() {
    for (std::uint32_t e : touched_entities) {
        std::fill_n(entity_grad.begin() + std::size_t(e) * entity_width_, entity_width_, 0.0);
        entity_touched[e] = 0;
    }
    for (std::uint32_t p : touched_relations) {
        std::fill_n(relation_grad.begin() + std::size_t(p) * relation_width_, relation_width_,
                    0.0);
        if (!normal_grad.empty())
            std::fill_n(normal_grad.begin() + std::size_t(p) * dim_, dim_, 0.0);
        relation_touched[p] = 0;
    }
    touched_entities.clear();
    touched_relations.clear();
    if (conve_touched) {
        std::fill(filter_grad.begin(), filter_grad.end(), 0.0);
        std::fill(proj_grad.begin(), proj_grad.end(), 0.0);
        conve_touched = false;
    }
}

std::span<double> GradSink::entity_row(EntityId e) {
    return {entity_grad.data() + std::size_t(e) * entity_width_, std::size_t(entity_width_)};
}
std::span<double> GradSink::relation_row(RelationId p) {
    return {relation_grad.data() + std::size_t(p) * relation_width_,
            std::size_t(relation_width_)};
}
std::span<double> GradSink::normal_row(RelationId p) {
    return {normal_grad.data() + std::size_t(p) * dim_, std::size_t(dim_)};
}
void GradSink::mark_entity(EntityId e) {
    if (!entity_touched[e]) {
        entity_touched[e] = 1;
        touched_entities.push_back(e);
    }
}
void GradSink::mark_relation(RelationId p) {
    if (!relation_touched[p]) {
        relation_touched[p] = 1;
        touched_relations.push_back(p);
    }
}

// ---------------------------------------------------------------------------

QueryState query_forward(const ModelParams& P, std::span<const double> svec,
                         std::span<const double> pvec, RelationId p) {
    QueryState qs;
    qs.p = p;
    qs.avec.assign(svec.begin(), svec.end());
    qs.pvec.assign(pvec.begin(), pvec.end());
    const int d = P.dim;
    switch (P.kind) {
        case ModelKind::DistMult: {
            qs.q.resize(d);
            for (int i = 0; i < d; ++i) qs.q[i] = svec[i] * pvec[i];
            break;
        }
        case ModelKind::ComplEx: {
            // q = e_s * r_p in C; score(o) = Re(<e_s, r_p, conj(e_o)>) reduces to
            // dot(q, e_o) in interleaved storage.
            qs.q.resize(2 * d);
            for (int k = 0; k + 1 < 2 * d; k += 2) {
                double a = svec[k], b = svec[k + 1], c = pvec[k], e = pvec[k + 1];
                qs.q[k] = a * c - b * e;
                qs.q[k + 1] = a * e + b * c;
            }
            break;
        }
        case ModelKind::ConvE:
            conve_forward(P, qs);
            break;
        case ModelKind::TransE: {
            qs.t.resize(d);
            for (int i = 0; i < d; ++i) qs.t[i] = svec[i] + pvec[i];
            break;
        }
        case ModelKind::TransH: {
            auto w = P.normal_row(p);
            qs.normal.assign(w.begin(), w.end());
            qs.t.resize(d);
            project_out(qs.normal, svec, qs.t);
            for (int i = 0; i < d; ++i) qs.t[i] += pvec[i];
            break;
        }
        case ModelKind::RotatE: {
            qs.cos_theta.resize(d);
            qs.sin_theta.resize(d);
            for (int i = 0; i < d; ++i) {
                qs.cos_theta[i] = std::cos(pvec[i]);
                qs.sin_theta[i] = std::sin(pvec[i]);
            }
            qs.t.resize(2 * d);
            for (int i = 0; i < d; ++i) {
                double a = svec[2 * i], b = svec[2 * i + 1];
                qs.t[2 * i] = a * qs.cos_theta[i] - b * qs.sin_theta[i];
                qs.t[2 * i + 1] = a * qs.sin_theta[i] + b * qs.cos_theta[i];
            }
            break;
        }
    }
    return qs;
}

QueryState subject_query_forward(const ModelParams& P, std::span<const double> ovec,
                                 std::span<const double> pvec, RelationId p) {
    QueryState qs;
    qs.p = p;
    qs.subject_side = true;
    qs.avec.assign(ovec.begin(), ovec.end());
    qs.pvec.assign(pvec.begin(), pvec.end());
    const int d = P.dim;
    switch (P.kind) {
        case ModelKind::DistMult: {
            qs.q.resize(d);
            for (int i = 0; i < d; ++i) qs.q[i] = pvec[i] * ovec[i];
            break;
        }
        case ModelKind::ComplEx: {
            // score(x) = Re(<x, r, conj(o)>) = dot(x, q) with q = conj(r) * o.
            qs.q.resize(2 * d);
            for (int k = 0; k + 1 < 2 * d; k += 2) {
                double c = pvec[k], e = pvec[k + 1];
                double a = ovec[k], b = ovec[k + 1];
                qs.q[k] = c * a + e * b;
                qs.q[k + 1] = c * b - e * a;
            }
            break;
        }
        case ModelKind::TransE: {
            // -|x + r - o| = -|(o - r) - x|
            qs.t.resize(d);
            for (int i = 0; i < d; ++i) qs.t[i] = ovec[i] - pvec[i];
            break;
        }
        case ModelKind::TransH: {
            auto w = P.normal_row(p);
            qs.normal.assign(w.begin(), w.end());
            qs.t.resize(d);
            project_out(qs.normal, ovec, qs.t);
            for (int i = 0; i < d; ++i) qs.t[i] -= pvec[i];
            break;
        }
        case ModelKind::RotatE: {
            // -|x*r - o| = -|o*conj(r) - x| since the rotation is an isometry
            // of each complex coordinate.
            qs.cos_theta.resize(d);
            qs.sin_theta.resize(d);
            qs.t.resize(2 * d);
            for (int i = 0; i < d; ++i) {
                qs.cos_theta[i] = std::cos(pvec[i]);
                qs.sin_theta[i] = std::sin(pvec[i]);
                double a = ovec[2 * i], b = ovec[2 * i + 1];
                qs.t[2 * i] = a * qs.cos_theta[i] + b * qs.sin_theta[i];
                qs.t[2 * i + 1] = -a * qs.sin_theta[i] + b * qs.cos_theta[i];
            }
            break;
        }
        case ModelKind::ConvE:
            throw Error("ConvE head queries need per-candidate evaluation");
    }
    return qs;
}

double query_score(const ModelParams& P, const QueryState& qs, EntityId c) {
    auto cvec = P.entity_row(c);
    switch (P.kind) {
        case ModelKind::DistMult:
        case ModelKind::ComplEx:
        case ModelKind::ConvE: {
            double acc = 0;
            for (std::size_t i = 0; i < qs.q.size(); ++i) acc += qs.q[i] * cvec[i];
            return acc;
        }
        case ModelKind::TransE:
        case ModelKind::RotatE: {
            std::vector<double> u(qs.t.size());
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = qs.t[i] - cvec[i];
            return -dist_value(u, P.norm, P.kind == ModelKind::RotatE).value;
        }
        case ModelKind::TransH: {
            std::vector<double> proj(qs.t.size()), u(qs.t.size());
            project_out(qs.normal, cvec, proj);
            for (std::size_t i = 0; i < u.size(); ++i) u[i] = qs.t[i] - proj[i];
            return -dist_value(u, P.norm, false).value;
        }
    }
    return 0;
}

void query_scores_all(const ModelParams& P, const QueryState& qs, std::span<double> out) {
    const std::size_t n = P.n_entities;
    switch (P.kind) {
        case ModelKind::DistMult:
        case ModelKind::ComplEx:
        case ModelKind::ConvE: {
            const int w = P.entity_width();
            MapMat E(P.entity_table.data(), n, w);
            MapVec q(qs.q.data(), w);
            Eigen::Map<Eigen::VectorXd>(out.data(), n).noalias() = E * q;
            break;
        }
        default: {
            for (std::size_t j = 0; j < n; ++j) out[j] = query_score(P, qs, EntityId(j));
            break;
        }
    }
}

namespace {

// Chain rule from d(dot-query q) to the anchor and relation rows.
void finish_dot_backward(const ModelParams& P, const QueryState& qs,
                         std::span<const double> dq, QueryBackward& bw, GradSink& sink) {
    const int d = P.dim;
    if (P.kind == ModelKind::DistMult) {
        // both sides: q = avec o pvec elementwise
        for (int i = 0; i < d; ++i) {
            bw.d_avec[i] = dq[i] * qs.pvec[i];
            bw.d_pvec[i] = dq[i] * qs.avec[i];
        }
    } else if (P.kind == ModelKind::ComplEx) {
        if (!qs.subject_side) {
            // q = s * r
            for (int k = 0; k + 1 < 2 * d; k += 2) {
                double u = dq[k], v = dq[k + 1];
                double a = qs.avec[k], b = qs.avec[k + 1];
                double c = qs.pvec[k], e = qs.pvec[k + 1];
                bw.d_avec[k] = u * c + v * e;
                bw.d_avec[k + 1] = -u * e + v * c;
                bw.d_pvec[k] = u * a + v * b;
                bw.d_pvec[k + 1] = -u * b + v * a;
            }
        } else {
            // q = conj(r) * o: q_re = c*a + e*b, q_im = c*b - e*a
            for (int k = 0; k + 1 < 2 * d; k += 2) {
                double u = dq[k], v = dq[k + 1];
                double a = qs.avec[k], b = qs.avec[k + 1];  // anchor = o
                double c = qs.pvec[k], e = qs.pvec[k + 1];
                bw.d_avec[k] = u * c - v * e;
                bw.d_avec[k + 1] = u * e + v * c;
                bw.d_pvec[k] = u * a + v * b;
                bw.d_pvec[k + 1] = u * b - v * a;
            }
        }
    } else {  // ConvE, tail side only
        conve_backprop(P, qs, dq, bw.d_avec, bw.d_pvec, sink);
    }
}

// Chain rule from d(translation target t) to the anchor and relation rows.
void finish_dist_backward(const ModelParams& P, const QueryState& qs,
                          std::span<const double> dt, QueryBackward& bw) {
    const int d = P.dim;
    switch (P.kind) {
        case ModelKind::TransE: {
            // tail: t = s + r; head: t = o - r
            for (int i = 0; i < d; ++i) {
                bw.d_avec[i] = dt[i];
                bw.d_pvec[i] = qs.subject_side ? -dt[i] : dt[i];
            }
            break;
        }
        case ModelKind::TransH: {
            // tail: t = proj(s) + r; head: t = proj(o) - r
            project_out_adjoint(qs.normal, dt, bw.d_avec);
            for (int i = 0; i < d; ++i) bw.d_pvec[i] = qs.subject_side ? -dt[i] : dt[i];
            project_normal_grad(qs.normal, qs.avec, dt, bw.d_normal);
            break;
        }
        case ModelKind::RotatE: {
            if (!qs.subject_side) {
                // t = rot(s, +theta)
                for (int i = 0; i < d; ++i) {
                    double ure = dt[2 * i], uim = dt[2 * i + 1];
                    bw.d_avec[2 * i] = ure * qs.cos_theta[i] + uim * qs.sin_theta[i];
                    bw.d_avec[2 * i + 1] = -ure * qs.sin_theta[i] + uim * qs.cos_theta[i];
                    bw.d_pvec[i] = -ure * qs.t[2 * i + 1] + uim * qs.t[2 * i];
                }
            } else {
                // t = rot(o, -theta)
                for (int i = 0; i < d; ++i) {
                    double ure = dt[2 * i], uim = dt[2 * i + 1];
                    bw.d_avec[2 * i] = ure * qs.cos_theta[i] - uim * qs.sin_theta[i];
                    bw.d_avec[2 * i + 1] = ure * qs.sin_theta[i] + uim * qs.cos_theta[i];
                    bw.d_pvec[i] = ure * qs.t[2 * i + 1] - uim * qs.t[2 * i];
                }
            }
            break;
        }
        default: break;
    }
}

// Shared backward over candidates; `get` maps j to (entity, weight).
template <typename GetFn>
QueryBackward backward_impl(const ModelParams& P, const QueryState& qs, std::size_t count,
                            GetFn get, GradSink& sink, bool all_candidates,
                            std::span<const double> all_weights) {
    QueryBackward bw;
    bw.d_avec.assign(P.entity_width(), 0.0);
    bw.d_pvec.assign(P.relation_width(), 0.0);
    bw.kink_distance = qs.kink;

    switch (P.kind) {
        case ModelKind::DistMult:
        case ModelKind::ComplEx:
        case ModelKind::ConvE: {
            const int w = P.entity_width();
            std::vector<double> dq(qs.q.size(), 0.0);
            if (all_candidates) {
                MapMat E(P.entity_table.data(), P.n_entities, w);
                MapVec g(all_weights.data(), P.n_entities);
                Eigen::Map<Eigen::VectorXd>(dq.data(), w).noalias() = E.transpose() * g;
                Eigen::Map<RowMat> EG(sink.entity_grad.data(), P.n_entities, w);
                MapVec q(qs.q.data(), w);
                EG.noalias() += g * q.transpose();
                for (std::uint32_t e = 0; e < P.n_entities; ++e) sink.mark_entity(e);
            } else {
                for (std::size_t j = 0; j < count; ++j) {
                    auto [c, g] = get(j);
                    if (g == 0) continue;
                    auto cvec = P.entity_row(c);
                    sink.mark_entity(c);
                    auto grow = sink.entity_row(c);
                    for (std::size_t i = 0; i < dq.size(); ++i) {
                        dq[i] += g * cvec[i];
                        grow[i] += g * qs.q[i];
                    }
                }
            }
            finish_dot_backward(P, qs, dq, bw, sink);
            break;
        }
        case ModelKind::TransE:
        case ModelKind::RotatE: {
            const std::size_t tw = qs.t.size();
            std::vector<double> dt(tw, 0.0), u(tw), nvec(tw);
            const bool cx = (P.kind == ModelKind::RotatE);
            for (std::size_t j = 0; j < count; ++j) {
                auto [c, g] = get(j);
                auto cvec = P.entity_row(c);
                for (std::size_t i = 0; i < tw; ++i) u[i] = qs.t[i] - cvec[i];
                DistInfo info = dist_grad(u, P.norm, cx, nvec);
                bw.nondifferentiable |= info.nondiff;
                bw.kink_distance = std::min(bw.kink_distance, info.kink);
                if (g == 0) continue;
                sink.mark_entity(c);
                auto grow = sink.entity_row(c);
                for (std::size_t i = 0; i < tw; ++i) {
                    dt[i] -= g * nvec[i];  // score = -norm(t - e_c)
                    grow[i] += g * nvec[i];
                }
            }
            finish_dist_backward(P, qs, dt, bw);
            break;
        }
        case ModelKind::TransH: {
            const std::size_t tw = qs.t.size();
            bw.d_normal.assign(P.dim, 0.0);
            std::vector<double> dt(tw, 0.0), u(tw), nvec(tw), proj_c(tw), vtmp(tw);
            for (std::size_t j = 0; j < count; ++j) {
                auto [c, g] = get(j);
                auto cvec = P.entity_row(c);
                project_out(qs.normal, cvec, proj_c);
                for (std::size_t i = 0; i < tw; ++i) u[i] = qs.t[i] - proj_c[i];
                DistInfo info = dist_grad(u, P.norm, false, nvec);
                bw.nondifferentiable |= info.nondiff;
                bw.kink_distance = std::min(bw.kink_distance, info.kink);
                if (g == 0) continue;
                for (std::size_t i = 0; i < tw; ++i) {
                    dt[i] -= g * nvec[i];
                    vtmp[i] = g * nvec[i];  // upstream on proj(e_c)
                }
                sink.mark_entity(c);
                auto grow = sink.entity_row(c);
                double dot = 0;
                for (std::size_t i = 0; i < tw; ++i) dot += qs.normal[i] * vtmp[i];
                for (std::size_t i = 0; i < tw; ++i) grow[i] += vtmp[i] - dot * qs.normal[i];
                project_normal_grad(qs.normal, cvec, vtmp, bw.d_normal);
            }
            finish_dist_backward(P, qs, dt, bw);
            break;
        }
    }
    return bw;
}

}  // namespace

QueryBackward query_backward(const ModelParams& P, const QueryState& qs,
                             std::span<const EntityId> candidates,
                             std::span<const double> weights, GradSink& sink) {
    auto get = [&](std::size_t j) {
        return std::pair<EntityId, double>(candidates[j], weights[j]);
    };
    return backward_impl(P, qs, candidates.size(), get, sink, false, {});
}

QueryBackward query_backward_all(const ModelParams& P, const QueryState& qs,
                                 std::span<const double> weights, GradSink& sink) {
    auto get = [&](std::size_t j) {
        return std::pair<EntityId, double>(EntityId(j), weights[j]);
    };
    return backward_impl(P, qs, P.n_entities, get, sink, true, weights);
}

void conve_subject_scores(const ModelParams& P, std::span<const double> ovec,
                          std::span<const double> pvec, RelationId p,
                          std::span<const EntityId> candidates, std::span<double> out) {
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        QueryState qs = query_forward(P, P.entity_row(candidates[j]), pvec, p);
        double acc = 0;
        for (std::size_t i = 0; i < qs.q.size(); ++i) acc += qs.q[i] * ovec[i];
        out[j] = acc;
    }
}

QueryBackward conve_subject_backward(const ModelParams& P, std::span<const double> ovec,
                                     std::span<const double> pvec, RelationId p,
                                     std::span<const EntityId> candidates,
                                     std::span<const double> weights, GradSink& sink) {
    QueryBackward bw;
    bw.d_avec.assign(P.entity_width(), 0.0);
    bw.d_pvec.assign(P.relation_width(), 0.0);
    std::vector<double> dh(P.dim), dsub(P.dim), dp(P.dim);
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        double g = weights[j];
        EntityId x = candidates[j];
        QueryState qs = query_forward(P, P.entity_row(x), pvec, p);
        bw.kink_distance = std::min(bw.kink_distance, qs.kink);
        if (g == 0) continue;
        for (int i = 0; i < P.dim; ++i) {
            bw.d_avec[i] += g * qs.q[i];  // score = h . o
            dh[i] = g * ovec[i];
        }
        std::fill(dsub.begin(), dsub.end(), 0.0);
        std::fill(dp.begin(), dp.end(), 0.0);
        conve_backprop(P, qs, dh, dsub, dp, sink);
        sink.mark_entity(x);
        auto grow = sink.entity_row(x);
        for (int i = 0; i < P.dim; ++i) {
            grow[i] += dsub[i];
            bw.d_pvec[i] += dp[i];
        }
    }
    return bw;
}

// ---------------------------------------------------------------------------

double score(const ModelParams& params, EntityId s, RelationId p, EntityId o) {
    params.check_entity(s);
    params.check_relation(p);
    params.check_entity(o);
    QueryState qs = query_forward(params, params.entity_row(s), params.relation_row(p), p);
    return query_score(params, qs, o);
}

void score_all_objects(const ModelParams& params, EntityId s, RelationId p,
                       std::span<double> out) {
    params.check_entity(s);
    params.check_relation(p);
    if (out.size() != params.n_entities) throw Error("output size mismatch");
    QueryState qs = query_forward(params, params.entity_row(s), params.relation_row(p), p);
    query_scores_all(params, qs, out);
}

void score_all_subjects(const ModelParams& params, RelationId p, EntityId o,
                        std::span<double> out) {
    params.check_entity(o);
    params.check_relation(p);
    if (out.size() != params.n_entities) throw Error("output size mismatch");
    if (params.kind == ModelKind::ConvE) {
        QueryState qs;
        auto ovec = params.entity_row(o);
        auto pvec = params.relation_row(p);
        for (std::uint32_t j = 0; j < params.n_entities; ++j) {
            QueryState q = query_forward(params, params.entity_row(j), pvec, p);
            double acc = 0;
            for (std::size_t i = 0; i < q.q.size(); ++i) acc += q.q[i] * ovec[i];
            out[j] = acc;
        }
        return;
    }
    QueryState qs = subject_query_forward(params, params.entity_row(o),
                                          params.relation_row(p), p);
    query_scores_all(params, qs, out);
}

ScoreGradients score_gradients(const ModelParams& params, EntityId s, RelationId p,
                               EntityId o) {
    params.check_entity(s);
    params.check_relation(p);
    params.check_entity(o);
    QueryState qs = query_forward(params, params.entity_row(s), params.relation_row(p), p);
    GradSink sink;
    sink.init(params);
    EntityId cands[1] = {o};
    double weights[1] = {1.0};
    QueryBackward bw = query_backward(params, qs, cands, weights, sink);

    ScoreGradients g;
    g.d_subject = std::move(bw.d_avec);
    g.d_relation = std::move(bw.d_pvec);
    auto orow = sink.entity_row(o);
    g.d_object.assign(orow.begin(), orow.end());
    if (params.kind == ModelKind::TransH) g.d_normal = std::move(bw.d_normal);
    if (params.kind == ModelKind::ConvE) {
        g.d_filter = sink.filter_grad;
        g.d_proj = sink.proj_grad;
    }
    g.nondifferentiable = bw.nondifferentiable;
    g.kink_distance = bw.kink_distance;
    return g;
}

}  // namespace kge
