#pragma once

#include <string>

#include "cellia/alignment.hpp"
#include "cellia/network.hpp"

namespace cellia {

/// JSON channel dump with header {G,K,M,N,seed}; entries stored column-major
/// as separate re/im arrays so reloads are bit-exact.
void write_channels_json(const std::string& path, const ChannelSet& ch);
ChannelSet read_channels_json(const std::string& path);

void write_beamformers_json(const std::string& path, const BeamformerSet& bf);
BeamformerSet read_beamformers_json(const std::string& path);

/// BS-side (downlink) precoders, one N x d matrix per user slot.
void write_downlink_precoders_json(const std::string& path, const NetworkConfig& cfg, int d,
                                   const std::vector<Eigen::MatrixXcd>& precoders);

std::string alignment_report_json(const AlignmentReport& rep);

}  // namespace cellia
