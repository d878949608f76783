#include "kge/optimizer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace kge {

OptimizerKind optimizer_from_name(std::string_view name) {
    std::string n(name);
    std::transform(n.begin(), n.end(), n.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (n == "adam") return OptimizerKind::Adam;
    if (n == "adagrad") return OptimizerKind::Adagrad;
    throw ConfigError("unknown optimizer: " + std::string(name));
}

const char* optimizer_name(OptimizerKind kind) {
    return kind == OptimizerKind::Adam ? "Adam" : "Adagrad";
}

Optimizer::Optimizer(OptimizerKind kind, const ModelParams& params, double learning_rate)
    : kind_(kind), lr_(learning_rate) {
    auto setup = [&](Slot& slot, std::size_t n) {
        if (kind_ == OptimizerKind::Adagrad) {
            slot.accum.assign(n, 0.0);
        } else {
            slot.m.assign(n, 0.0);
            slot.v.assign(n, 0.0);
        }
    };
    setup(entity_, params.entity_table.size());
    setup(relation_, params.relation_table.size());
    setup(normal_, params.transh_normals.size());
    setup(filter_, params.conve_filter.size());
    setup(proj_, params.conve_proj.size());
}

void Optimizer::apply(std::span<double> x, std::span<const double> g, Slot& slot,
                      std::size_t offset) {
    if (kind_ == OptimizerKind::Adagrad) {
        double* acc = slot.accum.data() + offset;
        for (std::size_t i = 0; i < x.size(); ++i) {
            acc[i] += g[i] * g[i];
            x[i] -= lr_ * g[i] / (std::sqrt(acc[i]) + kAdagradEps);
        }
    } else {
        double* m = slot.m.data() + offset;
        double* v = slot.v.data() + offset;
        const double c1 = 1.0 / bias1_, c2 = 1.0 / bias2_;
        for (std::size_t i = 0; i < x.size(); ++i) {
            m[i] = kBeta1 * m[i] + (1 - kBeta1) * g[i];
            v[i] = kBeta2 * v[i] + (1 - kBeta2) * g[i] * g[i];
            x[i] -= lr_ * (m[i] * c1) / (std::sqrt(v[i] * c2) + kAdamEps);
        }
    }
}

void Optimizer::step(ModelParams& params, const GradSink& sink) {
    ++t_;
    bias1_ = 1.0 - std::pow(kBeta1, double(t_));
    bias2_ = 1.0 - std::pow(kBeta2, double(t_));

    const int ew = params.entity_width();
    const int rw = params.relation_width();
    for (std::uint32_t e : sink.touched_entities) {
        apply(params.entity_row(e),
              {sink.entity_grad.data() + std::size_t(e) * ew, std::size_t(ew)}, entity_,
              std::size_t(e) * ew);
    }
    for (std::uint32_t p : sink.touched_relations) {
        apply(params.relation_row(p),
              {sink.relation_grad.data() + std::size_t(p) * rw, std::size_t(rw)}, relation_,
              std::size_t(p) * rw);
        if (!params.transh_normals.empty()) {
            apply(params.normal_row(p),
                  {sink.normal_grad.data() + std::size_t(p) * params.dim,
                   std::size_t(params.dim)},
                  normal_, std::size_t(p) * params.dim);
        }
    }
    if (sink.conve_touched) {
        apply(params.conve_filter, sink.filter_grad, filter_, 0);
        apply(params.conve_proj, sink.proj_grad, proj_, 0);
    }
    if (!params.transh_normals.empty()) {
        for (std::uint32_t p : sink.touched_relations) {
            auto row = params.normal_row(p);
            double sq = 0;
            for (double x : row) sq += x * x;
            if (sq < 1e-24) continue;
            double inv = 1.0 / std::sqrt(sq);
            for (double& x : row) x *= inv;
        }
    }
}

}  // namespace kge
