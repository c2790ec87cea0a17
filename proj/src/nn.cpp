#include "banditreg/nn.hpp"

#include <cmath>
#include <stdexcept>

#include "banditreg/rng.hpp"

namespace banditreg {

std::vector<int> MlpSpec::layer_dims() const {
    std::vector<int> dims;
    dims.reserve(hidden_dims.size() + 2);
    dims.push_back(input_dim);
    dims.insert(dims.end(), hidden_dims.begin(), hidden_dims.end());
    dims.push_back(output_dim);
    return dims;
}

long MlpSpec::parameter_count() const {
    const auto dims = layer_dims();
    long count = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        count += static_cast<long>(dims[l] + 1) * dims[l + 1];
    }
    return count;
}

void MlpSpec::validate() const {
    if (input_dim < 1 || output_dim < 1) {
        throw std::invalid_argument("MlpSpec: input_dim and output_dim must be >= 1");
    }
    if (hidden_dims.empty()) {
        throw std::invalid_argument("MlpSpec: hidden_dims must be non-empty");
    }
    for (int d : hidden_dims) {
        if (d < 1) throw std::invalid_argument("MlpSpec: hidden dims must be >= 1");
    }
}

MlpParams init_params(const MlpSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed);
    const auto dims = spec.layer_dims();
    const int layers = spec.layer_count();

    MlpParams params;
    params.weights.reserve(layers);
    params.biases.reserve(layers);
    for (int l = 0; l < layers; ++l) {
        const int fan_in = dims[l];
        const int fan_out = dims[l + 1];
        const bool is_output = (l == layers - 1);
        const double stddev = is_output ? std::sqrt(1.0 / fan_in) : std::sqrt(2.0 / fan_in);
        Matrix w(fan_out, fan_in);
        for (Index r = 0; r < w.rows(); ++r) {
            for (Index c = 0; c < w.cols(); ++c) {
                w(r, c) = rng.normal(0.0, stddev);
            }
        }
        params.weights.push_back(std::move(w));
        params.biases.push_back(Vector::Zero(fan_out));
    }
    return params;
}

namespace {

void check_shapes(const MlpSpec& spec, const MlpParams& params) {
    const auto dims = spec.layer_dims();
    const int layers = spec.layer_count();
    if (static_cast<int>(params.weights.size()) != layers ||
        static_cast<int>(params.biases.size()) != layers) {
        throw std::invalid_argument("MlpParams: layer count does not match spec");
    }
    for (int l = 0; l < layers; ++l) {
        if (params.weights[l].rows() != dims[l + 1] || params.weights[l].cols() != dims[l] ||
            params.biases[l].size() != dims[l + 1]) {
            throw std::invalid_argument("MlpParams: layer shape does not match spec");
        }
    }
}

} // namespace

Matrix forward(const MlpSpec& spec, const MlpParams& params, const Matrix& inputs,
               ForwardTrace* trace) {
    check_shapes(spec, params);
    if (inputs.cols() != spec.input_dim) {
        throw std::invalid_argument("forward: input width does not match spec.input_dim");
    }
    const int layers = spec.layer_count();
    if (trace) {
        trace->pre_activations.clear();
        trace->activations.clear();
        trace->pre_activations.reserve(layers);
        trace->activations.reserve(layers + 1);
        trace->activations.push_back(inputs);
    }

    Matrix a = inputs;
    for (int l = 0; l < layers; ++l) {
        Matrix z = (a * params.weights[l].transpose()).rowwise() + params.biases[l].transpose();
        const bool is_output = (l == layers - 1);
        if (!is_output) {
            a = z.cwiseMax(0.0);
        } else if (spec.output_activation == OutputActivation::Tanh) {
            a = z.array().tanh().matrix();
        } else {
            a = z;
        }
        if (trace) {
            trace->pre_activations.push_back(std::move(z));
            trace->activations.push_back(a);
        }
    }
    return a;
}

BackwardResult backward(const MlpSpec& spec, const MlpParams& params,
                        const ForwardTrace& trace, const Matrix& output_grads) {
    check_shapes(spec, params);
    const int layers = spec.layer_count();
    if (static_cast<int>(trace.pre_activations.size()) != layers ||
        static_cast<int>(trace.activations.size()) != layers + 1) {
        throw std::invalid_argument("backward: trace does not match spec depth");
    }
    const Matrix& outputs = trace.activations.back();
    if (output_grads.rows() != outputs.rows() || output_grads.cols() != outputs.cols()) {
        throw std::invalid_argument("backward: output_grads shape does not match outputs");
    }

    BackwardResult result;
    result.grads.weights.resize(layers);
    result.grads.biases.resize(layers);

    // dZ of the output layer.
    Matrix dz;
    if (spec.output_activation == OutputActivation::Tanh) {
        dz = (output_grads.array() * (1.0 - outputs.array().square())).matrix();
    } else {
        dz = output_grads;
    }

    for (int l = layers - 1; l >= 0; --l) {
        const Matrix& a_prev = trace.activations[l];
        result.grads.weights[l] = dz.transpose() * a_prev;
        result.grads.biases[l] = dz.colwise().sum().transpose();
        Matrix da_prev = dz * params.weights[l];
        if (l > 0) {
            // ReLU mask of the previous layer; derivative at 0 is 0.
            dz = (da_prev.array() *
                  (trace.pre_activations[l - 1].array() > 0.0).cast<double>()).matrix();
        } else {
            result.input_grads = std::move(da_prev);
        }
    }
    return result;
}

AdamState make_adam_state(const MlpSpec& spec, double lr) {
    spec.validate();
    const auto dims = spec.layer_dims();
    AdamState state;
    state.lr = lr;
    const int layers = spec.layer_count();
    for (int l = 0; l < layers; ++l) {
        state.m.weights.push_back(Matrix::Zero(dims[l + 1], dims[l]));
        state.m.biases.push_back(Vector::Zero(dims[l + 1]));
        state.v.weights.push_back(Matrix::Zero(dims[l + 1], dims[l]));
        state.v.biases.push_back(Vector::Zero(dims[l + 1]));
    }
    return state;
}

bool all_finite(const MlpParams& params) {
    for (const auto& w : params.weights) {
        if (!w.allFinite()) return false;
    }
    for (const auto& b : params.biases) {
        if (!b.allFinite()) return false;
    }
    return true;
}

void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state) {
    const std::size_t layers = params.weights.size();
    if (grads.weights.size() != layers || grads.biases.size() != layers ||
        state.m.weights.size() != layers || state.v.weights.size() != layers) {
        throw std::invalid_argument("adam_step: shape mismatch");
    }
    if (!all_finite(grads)) {
        throw NumericalError("adam_step: non-finite gradient");
    }

    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));

    for (std::size_t l = 0; l < layers; ++l) {
        auto& mw = state.m.weights[l];
        auto& vw = state.v.weights[l];
        mw = state.beta1 * mw + (1.0 - state.beta1) * grads.weights[l];
        vw.array() = state.beta2 * vw.array() + (1.0 - state.beta2) * grads.weights[l].array().square();
        params.weights[l].array() -=
            state.lr * (mw.array() / bc1) / ((vw.array() / bc2).sqrt() + state.epsilon);

        auto& mb = state.m.biases[l];
        auto& vb = state.v.biases[l];
        mb = state.beta1 * mb + (1.0 - state.beta1) * grads.biases[l];
        vb.array() = state.beta2 * vb.array() + (1.0 - state.beta2) * grads.biases[l].array().square();
        params.biases[l].array() -=
            state.lr * (mb.array() / bc1) / ((vb.array() / bc2).sqrt() + state.epsilon);
    }
}

} // namespace banditreg
