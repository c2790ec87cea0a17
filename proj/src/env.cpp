#include "banditreg/env.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "banditreg/rng.hpp"

namespace banditreg {

Dataset sample_dataset(double range_lo, double range_hi, int n, double noise_std,
                       std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_dataset: n must be >= 1");
    if (!(range_lo < range_hi)) {
        throw std::invalid_argument("sample_dataset: range_lo must be < range_hi");
    }
    if (noise_std < 0.0) {
        throw std::invalid_argument("sample_dataset: noise_std must be >= 0");
    }

    Rng rng(seed);
    Dataset d;
    d.xs.resize(n);
    d.ys.resize(n);
    d.range_lo = range_lo;
    d.range_hi = range_hi;
    d.noise_std = noise_std;
    d.seed = seed;
    for (int i = 0; i < n; ++i) {
        const double x = rng.uniform(range_lo, range_hi);
        d.xs[i] = x;
        d.ys[i] = std::sin(x) + (noise_std > 0.0 ? rng.normal(0.0, noise_std) : 0.0);
    }
    return d;
}

Vector positional_encode(double x, int pe_dim) {
    if (pe_dim < 2 || pe_dim % 2 != 0) {
        throw std::invalid_argument("positional_encode: pe_dim must be even and >= 2");
    }
    Vector out(pe_dim);
    for (int k = 0; k < pe_dim / 2; ++k) {
        const double freq = std::ldexp(1.0, k); // 2^k
        out[2 * k] = std::sin(freq * x);
        out[2 * k + 1] = std::cos(freq * x);
    }
    return out;
}

Vector featurize(const Featurizer& f, double x) {
    if (f.mode == FeatureMode::Raw) {
        Vector v(1);
        v[0] = x;
        return v;
    }
    return positional_encode(x, f.pe_dim);
}

Matrix featurize(const Featurizer& f, const Vector& xs) {
    Matrix features(xs.size(), f.dim());
    for (Index i = 0; i < xs.size(); ++i) {
        features.row(i) = featurize(f, xs[i]).transpose();
    }
    return features;
}

double gaussian_reward(const RewardKernel& k, double y_hat, double y) {
    if (!(k.sigma > 0.0)) throw std::invalid_argument("gaussian_reward: sigma must be > 0");
    const double err = y - y_hat;
    return std::exp(-(err * err) / (2.0 * k.sigma * k.sigma));
}

Vector gaussian_reward(const RewardKernel& k, const Vector& y_hat, const Vector& y) {
    if (!(k.sigma > 0.0)) throw std::invalid_argument("gaussian_reward: sigma must be > 0");
    if (y_hat.size() != y.size()) {
        throw std::invalid_argument("gaussian_reward: size mismatch");
    }
    return (-(y - y_hat).array().square() / (2.0 * k.sigma * k.sigma)).exp().matrix();
}

namespace {

// Shortest text that parses back to the same double.
std::string format_double(double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace

void write_dataset_csv(const Dataset& d, std::ostream& out) {
    out << "x,y\n";
    for (Index i = 0; i < d.size(); ++i) {
        out << format_double(d.xs[i]) << ',' << format_double(d.ys[i]) << '\n';
    }
}

void write_dataset_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_dataset_csv: cannot open " + path);
    write_dataset_csv(d, out);
}

Dataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "x,y") {
        throw std::runtime_error("read_dataset_csv: missing 'x,y' header");
    }
    std::vector<double> xs, ys;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("read_dataset_csv: malformed line " + std::to_string(lineno));
        }
        std::size_t used = 0;
        xs.push_back(std::stod(line.substr(0, comma), &used));
        ys.push_back(std::stod(line.substr(comma + 1), &used));
    }
    Dataset d;
    d.xs = Eigen::Map<const Vector>(xs.data(), static_cast<Index>(xs.size()));
    d.ys = Eigen::Map<const Vector>(ys.data(), static_cast<Index>(ys.size()));
    if (d.size() > 0) {
        d.range_lo = d.xs.minCoeff();
        d.range_hi = d.xs.maxCoeff();
    }
    return d;
}

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_dataset_csv: cannot open " + path);
    return read_dataset_csv(in);
}

} // namespace banditreg
