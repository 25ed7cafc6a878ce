#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cellia/alignment.hpp"
#include "cellia/network.hpp"
#include "cellia/numerics.hpp"

namespace cellia {

/// Random scalar coefficients alpha^p_{lmn,i} of the alignment equations,
/// defined for cross links l != i, p in 1..L. Deterministic in the seed;
/// draws are consumed in (i, p, l, m, n) lexicographic order.
class CoefficientTensor {
public:
    CoefficientTensor(const NetworkConfig& cfg, int d, std::uint64_t seed);

    std::complex<double> alpha(int l, int m, int n, int i, int p) const;
    int L() const { return L_; }
    std::uint64_t seed() const { return seed_; }

private:
    NetworkConfig cfg_;
    int d_;
    int L_;
    std::uint64_t seed_;
    std::vector<std::complex<double>> a_;
};

/// The GLN x GKMd uplink alignment system M v = 0: block row (i,p) places
/// alpha^p_{lmn,i} H_{(lm,i)} under the (l,m,n) column slot for l != i and
/// zero blocks for l = i. Column slots are (cell, user, stream)
/// lexicographic, M columns each. Throws UnsupportedConfig when L <= 0
/// (the random-beamforming regime needs no alignment system).
Eigen::MatrixXcd assemble_alignment_matrix(const ChannelSet& ch, int d,
                                           const CoefficientTensor& coeffs);

enum class UsapStatus { Success, PitFailure, EmptyNullspace, NotApplicable };

std::string to_string(UsapStatus s);

/// Randomized independence test per user (Schwartz-Zippel style): completes
/// the candidate precoder with random columns and thresholds the smallest
/// singular value of the column-normalized square matrix.
struct PitResult {
    std::vector<bool> per_user;
    bool all{false};
    double min_sv{0.0};      // smallest normalized sv across users
    bool marginal{false};    // min_sv in [1e-10, 1e-6]
};

PitResult pit_independence(const std::vector<Eigen::MatrixXcd>& precoders, std::uint64_t seed,
                           const TolerancePolicy& pol = {});
PitResult pit_independence(const BeamformerSet& bf, std::uint64_t seed,
                           const TolerancePolicy& pol = {});

struct UsapDiagnostics {
    double residual{0.0};       // ||Mv|| / ||v|| of the accepted solution
    double pit_min_sv{0.0};
    bool pit_marginal{false};
    bool pit_first_draw{false}; // the first nullspace draw already passed
    int redraws{0};             // extra r draws consumed (<= 3)
    int rows{0};
    int cols{0};
    double min_direct_sv{0.0};
};

struct UsapOutcome {
    UsapStatus status{UsapStatus::NotApplicable};
    std::optional<BeamformerSet> beams;                 // uplink solutions
    std::vector<Eigen::MatrixXcd> downlink_precoders;   // N x d per user slot (i*K+j)
    UsapDiagnostics diag;
};

/// Two-step unstructured design in the uplink: draw coefficients from
/// `seed`, solve M v = 0 by nullspace projection of a random vector, split
/// v into per-user precoders, and accept only if the independence test and
/// verify_alignment both pass. On an independence failure the projection
/// vector is redrawn up to 3 times (fresh coefficients would count as a
/// new trial). All failure modes are statuses, never exceptions.
UsapOutcome usap_uplink(const ChannelSet& ch, int d, std::uint64_t seed,
                        const TolerancePolicy& pol = {});

/// Same pipeline on the reversed links (downlink channel = conjugate
/// transpose of the uplink channel). Applicable only when GKd > M and the
/// necessary count GK(GKd-M)M < GKdN holds; returns NotApplicable
/// otherwise. Because intra-cell interference rides on direct channels
/// here, success additionally requires an explicit signal/interference
/// separability check at every user.
UsapOutcome usap_downlink(const ChannelSet& ch, int d, std::uint64_t seed,
                          const TolerancePolicy& pol = {});

}  // namespace cellia
