#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cellia/rational.hpp"

namespace cellia {

/// A (G,K,M,N) cellular network: G cells, K users per cell, M antennas per
/// user, N antennas per base station.
struct NetworkConfig {
    int G{1};
    int K{1};
    int M{1};
    int N{1};

    NetworkConfig() = default;
    NetworkConfig(int g, int k, int m, int n);

    /// Antenna ratio M/N as an exact rational.
    Rational gamma() const { return Rational(M, N); }

    int users() const { return G * K; }

    bool operator==(const NetworkConfig&) const = default;
};

/// Per-user stream demand d.
struct DofDemand {
    int d{1};

    DofDemand() = default;
    explicit DofDemand(int streams);

    /// Alignment-equation count per BS, L = GKd - N.
    int alignment_equations(const NetworkConfig& cfg) const { return cfg.G * cfg.K * d - cfg.N; }
};

/// One seeded generic channel realization: the N x M matrix H_{(jl,i)} from
/// user (j,l) to BS i, for all G*K*G (user, BS) pairs. Immutable after
/// construction; regenerating with the same (config, seed) is bit-identical.
class ChannelSet {
public:
    ChannelSet(NetworkConfig cfg, std::uint64_t seed, std::vector<Eigen::MatrixXcd> entries);

    const NetworkConfig& config() const { return cfg_; }
    std::uint64_t seed() const { return seed_; }

    /// Channel from user (j,l) to BS i; all indices 0-based.
    const Eigen::MatrixXcd& H(int j, int l, int i) const;

    std::size_t count() const { return entries_.size(); }

    /// Largest absolute entry difference against another set (same shape).
    double max_abs_difference(const ChannelSet& other) const;

private:
    NetworkConfig cfg_;
    std::uint64_t seed_;
    std::vector<Eigen::MatrixXcd> entries_;
};

/// Draws the G*K*G generic channel matrices for (config, seed). Entries are
/// unit-variance circularly-symmetric complex Gaussian, generated in (j,l,i)
/// lexicographic order, column-major within each matrix. Every matrix is
/// checked to have full rank min(M,N) with smallest singular value above
/// 1e-6 (the genericity proxy).
ChannelSet generate_channels(const NetworkConfig& cfg, std::uint64_t seed);

/// Spatial extension: (G,K,M,N) -> (G,K,factor*M,factor*N); gamma unchanged.
NetworkConfig spatially_extend(const NetworkConfig& cfg, int factor);

}  // namespace cellia
