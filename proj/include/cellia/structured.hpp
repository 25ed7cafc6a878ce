#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "cellia/alignment.hpp"
#include "cellia/network.hpp"
#include "cellia/rational.hpp"

namespace cellia {

/// A set of same-cell beamformers together with its packing ratio s:t —
/// s beamformers whose images span t dimensions at the interfering BS.
/// Members are (user index within the cell, full-space beamformer).
struct PackingSet {
    int s{0};
    int t{0};
    std::vector<std::pair<int, Eigen::VectorXcd>> members;
};

/// Channels restricted to each user's unused directions: H-tilde = H * W,
/// where W spans the orthogonal complement of the user's already-designed
/// beamformers. Solutions in restricted coordinates lift back through W.
class EffectiveChannels {
public:
    EffectiveChannels(const ChannelSet& ch,
                      const std::vector<std::vector<Eigen::VectorXcd>>& designed,
                      const TolerancePolicy& pol = {});

    const Eigen::MatrixXcd& H(int j, int l, int i) const;
    const Eigen::MatrixXcd& W(int j, int l) const;
    int effective_dim(int j, int l) const;
    const NetworkConfig& config() const { return cfg_; }

private:
    NetworkConfig cfg_;
    std::vector<Eigen::MatrixXcd> h_;  // (j*K+l)*G+i
    std::vector<Eigen::MatrixXcd> w_;  // j*K+l
};

/// spec op restrict_complement: effective channels after removing the
/// directions already committed in `designed`.
EffectiveChannels restrict_complement(const ChannelSet& ch, const BeamformerSet& designed,
                                      const TolerancePolicy& pol = {});

/// `count` pairs of beamformers for users `pair` = (a,b) of `cell` whose
/// two images at the other BS are colinear (packing ratio 2:1).
std::vector<PackingSet> packing_2to1(const EffectiveChannels& eff, int cell,
                                     std::pair<int, int> pair, int count,
                                     const TolerancePolicy& pol = {});

/// `count` triples (K = 3) whose three images span two dimensions (3:2).
std::vector<PackingSet> packing_3to2(const EffectiveChannels& eff, int cell, int count,
                                     const TolerancePolicy& pol = {});

/// `count` triples (K = 3) whose three images span one dimension (3:1).
std::vector<PackingSet> packing_3to1(const EffectiveChannels& eff, int cell, int count,
                                     const TolerancePolicy& pol = {});

/// `count` single-user beamformers that zero-force the other BS (1:0).
std::vector<PackingSet> zero_force_set(const EffectiveChannels& eff, int cell, int user,
                                       int count, const TolerancePolicy& pol = {});

/// One ledger row: how many sets of ratio s:t a design used, and how many
/// the channel offered.
struct LedgerEntry {
    int s{0};
    int t{0};
    int count{0};
    int available{0};
};

/// Result of the packing-ratio construction over the extended network.
struct StructuredDesign {
    int extension_factor{1};
    BeamformerSet beams;                 // over spatially_extend(cfg, extension_factor)
    std::vector<LedgerEntry> ledger;     // counts in extended units
    Rational per_user_dof;               // in original (unextended) units
    AlignmentReport report;
};

/// Packing-ratio beamformer design for two-cell networks with K in {2,3}:
/// picks the gamma interval, extends space minimally until every set count
/// and per-user share is integral, builds the highest-ratio sets first and
/// fills with the next ratio on complement-restricted channels, cycling
/// user pairs so each user ends with the same share. Throws
/// UnsupportedConfig outside G=2, K in {2,3}.
StructuredDesign build_two_cell_design(const NetworkConfig& cfg, std::uint64_t seed,
                                       const TolerancePolicy& pol = {});

}  // namespace cellia
