#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "cellia/network.hpp"
#include "cellia/numerics.hpp"

namespace cellia {

/// Uplink transmit precoders: one M x d matrix V_{ij} per user (i,j).
/// A well-formed set has rank-d precoders (the stream-independence
/// condition); assert_stream_ranks checks it numerically. Construction
/// does not enforce it so that defective candidates (e.g. unstructured
/// solutions awaiting the independence test) can be represented.
class BeamformerSet {
public:
    BeamformerSet(NetworkConfig cfg, int d, std::vector<Eigen::MatrixXcd> precoders);

    const NetworkConfig& config() const { return cfg_; }
    int d() const { return d_; }

    const Eigen::MatrixXcd& precoder(int i, int j) const;
    const std::vector<Eigen::MatrixXcd>& all() const { return v_; }

    /// True iff every V_{ij} has numerical rank d.
    bool assert_stream_ranks(const TolerancePolicy& pol = {}) const;

private:
    NetworkConfig cfg_;
    int d_;
    std::vector<Eigen::MatrixXcd> v_;  // index (i*K + j)
};

/// Receive filters U_{ij} (N x d, orthonormal columns), index (i*K + j).
struct ReceiveFilterSet {
    std::vector<Eigen::MatrixXcd> U;
};

/// Numerical check of the alignment rank conditions.
struct AlignmentReport {
    std::vector<int> interference_rank;         // r_i per BS
    std::vector<int> signal_interference_rank;  // rank([signal | R_i]) per BS
    std::vector<int> direct_rank;               // rank(U^H H V) per user (i*K+j)
    std::vector<std::array<double, 2>> interference_tail_svs;  // two smallest svs of R_i
    std::vector<double> direct_min_sv;          // smallest sv of U^H H V per user
    bool pass{false};

    int max_interference_rank() const;
};

/// The N x (G-1)Kd matrix R_i of cross-cell interference images at BS i,
/// columns H_{(jl,i)} v_{jlk} in (cell, user, stream) lexicographic order
/// over j != i.
Eigen::MatrixXcd interference_matrix(const ChannelSet& ch, const BeamformerSet& bf, int i);

/// Evaluates rank(R_i) <= N - Kd at every BS and the per-user direct-link
/// rank through interim receive filters; pass iff both hold everywhere.
AlignmentReport verify_alignment(const ChannelSet& ch, const BeamformerSet& bf,
                                 const TolerancePolicy& pol = {});

/// Receive filters with orthonormal columns orthogonal to span(R_i) and to
/// the other same-cell signal spaces, chosen so rank(U^H H V) = d. Throws
/// AlignmentViolated when rank(R_i) > N - Kd, SignalCollapse when the
/// projected direct link loses rank.
ReceiveFilterSet receive_filters(const ChannelSet& ch, const BeamformerSet& bf,
                                 const TolerancePolicy& pol = {});

}  // namespace cellia
