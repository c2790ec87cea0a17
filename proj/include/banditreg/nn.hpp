#pragma once

#include <cstdint>
#include <vector>

#include "banditreg/types.hpp"

namespace banditreg {

enum class OutputActivation { Tanh, Linear };

// Shape of a dense feedforward network. Hidden layers are always ReLU; only
// the output activation varies (Tanh for the actor, Linear for the critic).
struct MlpSpec {
    int input_dim = 1;
    std::vector<int> hidden_dims;
    int output_dim = 1;
    OutputActivation output_activation = OutputActivation::Linear;

    // Dims of every activation, input first: {input, hidden..., output}.
    std::vector<int> layer_dims() const;
    // Number of affine layers.
    int layer_count() const { return static_cast<int>(hidden_dims.size()) + 1; }
    // Sum of (fan_in + 1) * fan_out over consecutive layer pairs.
    long parameter_count() const;
    // Throws std::invalid_argument on empty hidden_dims or non-positive dims.
    void validate() const;
};

// Weights (fan_out x fan_in) and biases per affine layer, input to output.
struct MlpParams {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
};

// Gradients carry the exact parameter layout.
using MlpGrads = MlpParams;

// Batch forward pass bookkeeping kept for backward(). activations[0] is the
// input batch, activations[l+1] the output of affine layer l.
struct ForwardTrace {
    std::vector<Matrix> pre_activations;
    std::vector<Matrix> activations;
};

struct BackwardResult {
    MlpGrads grads;
    Matrix input_grads; // batch x input_dim
};

// He-scaled normal weights for ReLU layers (std = sqrt(2/fan_in)),
// Xavier-scaled for the output layer (std = sqrt(1/fan_in)), zero biases.
// Deterministic for a fixed seed.
MlpParams init_params(const MlpSpec& spec, std::uint64_t seed);

// Row-per-sample forward pass. Fills *trace when non-null.
Matrix forward(const MlpSpec& spec, const MlpParams& params, const Matrix& inputs,
               ForwardTrace* trace = nullptr);

// Exact gradients of L = sum(outputs .* output_grads) w.r.t. parameters and
// inputs. ReLU subgradient at 0 is 0, consistent with the forward pass.
BackwardResult backward(const MlpSpec& spec, const MlpParams& params,
                        const ForwardTrace& trace, const Matrix& output_grads);

struct AdamState {
    MlpGrads m;
    MlpGrads v;
    long t = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

AdamState make_adam_state(const MlpSpec& spec, double lr);

// Standard Adam update with bias correction; increments t. Throws
// NumericalError on non-finite gradients without mutating params or state.
void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state);

bool all_finite(const MlpParams& params);

} // namespace banditreg
