#pragma once

#include <optional>
#include <vector>

#include "cellia/network.hpp"
#include "cellia/rational.hpp"

namespace cellia {

/// The fraction set Q = { p/q : p in 1..G-1, q in 1..(G-p)K }, reduced and
/// deduplicated.
struct FractionSet {
    std::vector<Rational> elements;  // sorted ascending

    bool contains(const Rational& r) const;
};

FractionSet fraction_set(int G, int K);  // throws GMustExceedOne for G < 2

/// DoF/cell achievable by one- or two-sided decomposition with asymptotic
/// alignment: KMN/(KM+N) when (G-1)KM >= N, otherwise the random-beamforming
/// value min(KM, N).
Rational decomposition_dof_per_cell(const NetworkConfig& cfg);

/// X-network style outer bound on DoF/user: min over p/q in Q of
/// max(Np, Mq)/(Kp+q). Equivalent to branching on M/N <= p/q vs >=.
Rational xnet_outer_bound(const NetworkConfig& cfg);  // throws GMustExceedOne

/// Previously known outer bound on DoF/user:
/// min(M, N/K, max[KM,(G-1)N]/(K+G-1), max[N,(G-1)M]/(K+G-1)).
Rational prior_outer_bound(const NetworkConfig& cfg);

/// Variable-counting feasibility test: proper iff M + N >= (GK+1)d.
bool proper_test(const NetworkConfig& cfg, const DofDemand& d);

/// Per-user demand ceiling of the proper region, (M+N)/(GK+1).
Rational proper_limit_per_user(const NetworkConfig& cfg);

/// Optimal DoF/user for single-antenna users (M = 1):
/// N/(N+K) when N < (G-1)K; N/(GK) when (G-1)K <= N < GK; 1 when N >= GK.
Rational single_antenna_dof(const NetworkConfig& cfg);  // throws NotSingleAntenna

/// f_{(omega,K)}(M,N) = max(N*omega, M) / (K*omega + 1).
Rational f_omega(const Rational& omega, int K, int M, int N);

/// Optimal sDoF/user of the two-cell network with K in {2,3} users/cell:
/// the piecewise-linear minimum of M, N/K and the f_omega envelopes at
/// omega in {1/2,1} (K=2) or {1/3,1/2,2/3,1} (K=3).
Rational optimal_sdof_two_cell(int K, int M, int N);  // throws UnsupportedK

/// Closed-form optimal sDoF/user for two-cell networks with general K,
/// valid for gamma <= 1/(K-1) and gamma >= K/(K+1); absent between. This
/// bound is sometimes quoted for three-cell networks; on its validity range
/// it coincides with the two-cell closed forms for K in {2,3}, so it is
/// exposed as a two-cell result and left absent elsewhere.
std::optional<Rational> two_cell_partial_general_K(int K, int M, int N);

/// One critical antenna ratio; exact when the discriminant is a perfect
/// square, always carried as a double.
struct CriticalRatio {
    std::optional<Rational> exact;
    double value{0.0};
};

struct GammaCritical {
    CriticalRatio left;   // gamma_l
    CriticalRatio right;  // gamma_r, >= gamma_l
};

/// Ratios gamma where the decomposition inner bound meets the
/// proper-improper boundary: (K(G-1) +- sqrt(K^2(G-1)^2 - 4K)) / (2K).
/// Throws NoRealRoots when the discriminant is negative (e.g. (G,K) =
/// (2,2) or (2,3), where decomposition never dominates).
GammaCritical gamma_critical(int G, int K);

/// Necessary condition for USAP-uplink solvability: LN < KMd, L = GKd - N.
bool usap_uplink_necessary(const NetworkConfig& cfg, const DofDemand& d);

/// Necessary condition for USAP-downlink: GK(GKd - M)M < GKdN.
bool usap_downlink_necessary(const NetworkConfig& cfg, const DofDemand& d);

/// Full-cooperation MAC/BC reference bound per user: min(M, N/K).
Rational mac_bc_bound(const NetworkConfig& cfg);

/// Aggregated report of every bound at one configuration (per-user values).
struct BoundReport {
    Rational decomposition_inner;               // decomposition DoF/cell / K
    std::optional<Rational> xnet_outer;         // absent when G = 1
    Rational prior_outer;
    Rational proper_limit;                      // (M+N)/(GK+1)
    Rational mac_bc;
    std::optional<Rational> closed_form_optimal;
};

BoundReport bound_report(const NetworkConfig& cfg);

}  // namespace cellia
