#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kge/model.hpp"

namespace kge {

enum class OptimizerKind { Adam, Adagrad };

OptimizerKind optimizer_from_name(std::string_view name);
const char* optimizer_name(OptimizerKind kind);

// Sparse-row parameter updates: only rows touched by the current GradSink are
// visited. Adam moments and Adagrad accumulators are per-parameter; Adam bias
// correction uses the global step count.
class Optimizer {
public:
    Optimizer(OptimizerKind kind, const ModelParams& params, double learning_rate);

    double learning_rate() const { return lr_; }
    void set_learning_rate(double lr) { lr_ = lr; }

    void step(ModelParams& params, const GradSink& sink);

private:
    struct Slot {
        std::vector<double> accum;  // Adagrad
        std::vector<double> m, v;   // Adam
    };

    void apply(std::span<double> x, std::span<const double> g, Slot& slot, std::size_t offset);

    OptimizerKind kind_;
    double lr_;
    std::uint64_t t_ = 0;
    double bias1_ = 1.0, bias2_ = 1.0;  // running (1 - beta^t)
    Slot entity_, relation_, normal_, filter_, proj_;

    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kAdamEps = 1e-8;
    static constexpr double kAdagradEps = 1e-10;
};

}  // namespace kge
