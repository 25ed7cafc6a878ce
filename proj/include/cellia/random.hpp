#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace cellia {

/// Mixes a 64-bit value into a well-distributed sub-seed (splitmix64).
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic stream of standard circularly-symmetric complex Gaussian
/// samples (unit variance, E|h|^2 = 1).
///
/// The algorithm is pinned so that outputs are reproducible across
/// platforms and releases: a std::mt19937_64 engine (whose sequence is
/// fixed by the C++ standard) produces 53-bit uniforms, and each complex
/// sample is formed in polar coordinates as
///     h = sqrt(-ln u1) * exp(2*pi*i*u2),   u1 in (0,1], u2 in [0,1),
/// consuming exactly two engine outputs per sample. No standard-library
/// distribution adaptors are used anywhere (their sequences are
/// implementation-defined).
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0,1) from the top 53 bits of the engine.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    std::complex<double> cgauss() {
        const double u1 = 1.0 - uniform();  // (0,1]
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        const double th = 2.0 * M_PI * u2;
        return {r * std::cos(th), r * std::sin(th)};
    }

    /// Column-major fill, matching the documented dump ordering.
    Eigen::MatrixXcd matrix(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXcd a(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = cgauss();
        return a;
    }

    Eigen::VectorXcd vector(Eigen::Index n) {
        Eigen::VectorXcd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = cgauss();
        return v;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace cellia
