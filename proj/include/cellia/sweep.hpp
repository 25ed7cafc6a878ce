#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "cellia/network.hpp"
#include "cellia/rational.hpp"
#include "cellia/usap.hpp"

namespace cellia {

enum class Scheme { UsapUplink, UsapDownlink, Structured, BoundsOnly };

std::string to_string(Scheme s);
std::optional<Scheme> scheme_from_string(const std::string& s);

struct SweepSpec {
    int G{3};
    int K{1};
    int M_max{30};
    int N_max{30};
    int seeds{3};                 // trials per point; Success requires unanimity
    Scheme scheme{Scheme::UsapUplink};
    std::uint64_t base_seed{0};   // per-trial seeds derive from this and (M,N,d,trial)
    std::string out;              // CSV path ("" = don't write)
    std::string checkpoint;      // JSONL path ("" = no checkpointing)
    int threads{0};               // 0 = hardware concurrency
};

/// One grid-point outcome. For usap schemes `status` is the unanimous
/// UsapStatus name ("Mixed:<a>|<b>" if trials disagree, which the
/// seed-stability invariant forbids); structured records use
/// "Success"/"Failed".
struct SweepRecord {
    int G{0};
    int K{0};
    int M{0};
    int N{0};
    int d{0};
    Rational gamma;
    Rational d_over_N;
    std::string status;
    int seeds{0};
    double residual{0.0};
    double min_sv{0.0};
    double time_ms{0.0};
    std::string scheme;

    bool success() const { return status == "Success"; }
};

/// All (M,N,d) tuples inside the sweep box satisfying the seven
/// admissibility gates of the unstructured experiment:
/// L > 0, LN < KMd, d <= M, Kd <= N, M < GKd, gcd(M,N,d) = 1, proper.
std::vector<std::tuple<int, int, int>> enumerate_grid(const SweepSpec& spec);

/// Per-trial seed derivation (documented so sweeps are reproducible).
std::uint64_t trial_channel_seed(const SweepSpec& spec, int M, int N, int d, int trial);
std::uint64_t trial_scheme_seed(const SweepSpec& spec, int M, int N, int d, int trial);

/// Runs the chosen scheme at every grid point for every trial seed;
/// a point is Success only if all trials succeed. Records are sorted by
/// (M,N,d) before return. Completed (M,N,d,scheme) keys found in the
/// checkpoint file are skipped and their records reused.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

/// Post-hoc audit that every emitted record satisfies the admissibility
/// gates (usap schemes only; other schemes pass vacuously).
bool admissibility_recheck(const std::vector<SweepRecord>& recs, const SweepSpec& spec);

/// For each gamma with at least one Success, the maximum successful d/N.
/// Sorted by gamma ascending.
std::vector<std::pair<Rational, Rational>> extract_boundary(const std::vector<SweepRecord>& recs);

/// Monotonicity audit: (M,N,d) triples where a smaller admissible d failed
/// although a larger d succeeded at the same (M,N). Reported, not hidden;
/// this is an empirical expectation, not a theorem.
std::vector<std::tuple<int, int, int>> monotonicity_violations(
    const std::vector<SweepRecord>& recs);

/// One row of the bound-curve table, all values normalized by N.
struct BoundCurveRow {
    Rational gamma;
    Rational decomposition;              // per-user decomposition value / N
    Rational proper_limit;               // (gamma+1)/(GK+1)
    std::optional<Rational> xnet_outer;  // absent when G = 1
    Rational mac_bc;                     // min(gamma, 1/K)
    std::optional<Rational> usap_uplink_gate;    // 1/(K(G-gamma)), gamma < G
    std::optional<Rational> usap_downlink_gate;  // gamma^2/(GK*gamma - 1), GK*gamma > 1
};

std::vector<BoundCurveRow> emit_bound_curves(int G, int K, const std::vector<Rational>& gammas);

/// All reduced fractions with denominator <= max_den in (0, gamma_max].
std::vector<Rational> gamma_grid(const Rational& gamma_max, int max_den = 60);

/// CSV writers (schemas fixed; see README).
void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& recs);
void write_boundary_csv(const std::string& path,
                        const std::vector<std::pair<Rational, Rational>>& boundary);
void write_curves_csv(const std::string& path, const std::vector<BoundCurveRow>& rows, int G,
                      int K);
std::vector<SweepRecord> read_sweep_csv(const std::string& path);

}  // namespace cellia
