#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "banditreg/types.hpp"

namespace banditreg {

// Noisy-sine samples plus the metadata needed to regenerate them bit-identically.
struct Dataset {
    Vector xs;
    Vector ys;
    double range_lo = 0.0;
    double range_hi = 0.0;
    double noise_std = 0.0;
    std::uint64_t seed = 0;

    Index size() const { return xs.size(); }
};

// xs i.i.d. uniform on [range_lo, range_hi]; ys = sin(x) + Normal(0, noise_std^2).
// Deterministic per seed. Throws std::invalid_argument on n < 1 or an
// inverted range.
Dataset sample_dataset(double range_lo, double range_hi, int n, double noise_std,
                       std::uint64_t seed);

// Component i is sin(2^(i/2) * x) for even i and cos(2^((i-1)/2) * x) for odd
// i, so pairs share frequency 2^k. pe_dim must be even and >= 2.
Vector positional_encode(double x, int pe_dim);

enum class FeatureMode { Raw, PositionalEncoding };

struct Featurizer {
    FeatureMode mode = FeatureMode::Raw;
    int pe_dim = 16; // used only in PositionalEncoding mode

    int dim() const { return mode == FeatureMode::Raw ? 1 : pe_dim; }
};

Vector featurize(const Featurizer& f, double x);
// One row per sample.
Matrix featurize(const Featurizer& f, const Vector& xs);

// Gaussian kernel reward, exp(-(y - y_hat)^2 / (2 sigma^2)). Maximal (1.0)
// at zero error; sigma sets the error tolerance.
struct RewardKernel {
    double sigma = 0.2;
};

double gaussian_reward(const RewardKernel& k, double y_hat, double y);
Vector gaussian_reward(const RewardKernel& k, const Vector& y_hat, const Vector& y);

// CSV with header "x,y", one sample per row, full double precision.
void write_dataset_csv(const Dataset& d, std::ostream& out);
void write_dataset_csv(const Dataset& d, const std::string& path);
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);

} // namespace banditreg
