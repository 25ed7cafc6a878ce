#include "cellia/network.hpp"

#include <stdexcept>
#include <utility>

#include "cellia/errors.hpp"
#include "cellia/numerics.hpp"
#include "cellia/random.hpp"

namespace cellia {

NetworkConfig::NetworkConfig(int g, int k, int m, int n) : G(g), K(k), M(m), N(n) {
    if (G < 1 || K < 1 || M < 1 || N < 1)
        throw std::invalid_argument("NetworkConfig: G, K, M, N must all be >= 1");
}

DofDemand::DofDemand(int streams) : d(streams) {
    if (d < 1) throw std::invalid_argument("DofDemand: d must be >= 1");
}

ChannelSet::ChannelSet(NetworkConfig cfg, std::uint64_t seed, std::vector<Eigen::MatrixXcd> entries)
    : cfg_(cfg), seed_(seed), entries_(std::move(entries)) {
    const std::size_t expected =
        static_cast<std::size_t>(cfg_.G) * cfg_.K * cfg_.G;
    if (entries_.size() != expected)
        throw std::invalid_argument("ChannelSet: expected G*K*G matrices");
    for (const auto& h : entries_)
        if (h.rows() != cfg_.N || h.cols() != cfg_.M)
            throw std::invalid_argument("ChannelSet: every matrix must be N x M");
}

const Eigen::MatrixXcd& ChannelSet::H(int j, int l, int i) const {
    if (j < 0 || j >= cfg_.G || l < 0 || l >= cfg_.K || i < 0 || i >= cfg_.G)
        throw std::out_of_range("ChannelSet::H: index out of range");
    return entries_[static_cast<std::size_t>((j * cfg_.K + l) * cfg_.G + i)];
}

double ChannelSet::max_abs_difference(const ChannelSet& other) const {
    if (other.cfg_ != cfg_) throw std::invalid_argument("max_abs_difference: config mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < entries_.size(); ++k)
        m = std::max(m, (entries_[k] - other.entries_[k]).cwiseAbs().maxCoeff());
    return m;
}

ChannelSet generate_channels(const NetworkConfig& cfg, std::uint64_t seed) {
    GaussianStream rng(seed);
    std::vector<Eigen::MatrixXcd> entries;
    entries.reserve(static_cast<std::size_t>(cfg.G) * cfg.K * cfg.G);
    for (int j = 0; j < cfg.G; ++j)
        for (int l = 0; l < cfg.K; ++l)
            for (int i = 0; i < cfg.G; ++i) entries.push_back(rng.matrix(cfg.N, cfg.M));

    // Genericity proxy: full rank with smallest singular value above 1e-6.
    for (const auto& h : entries) {
        const Eigen::VectorXd sv = singular_values(h);
        if (sv(sv.size() - 1) <= 1e-6)
            throw Error("generate_channels: degenerate draw (smallest singular value <= 1e-6)");
    }
    return ChannelSet(cfg, seed, std::move(entries));
}

NetworkConfig spatially_extend(const NetworkConfig& cfg, int factor) {
    if (factor < 1) throw std::invalid_argument("spatially_extend: factor must be >= 1");
    return NetworkConfig(cfg.G, cfg.K, cfg.M * factor, cfg.N * factor);
}

}  // namespace cellia
