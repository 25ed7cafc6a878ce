#include "cellia/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "cellia/errors.hpp"

namespace cellia {

bool FractionSet::contains(const Rational& r) const {
    return std::binary_search(elements.begin(), elements.end(), r);
}

FractionSet fraction_set(int G, int K) {
    if (G < 2) throw GMustExceedOne("fraction_set: requires G >= 2");
    std::vector<Rational> out;
    for (int p = 1; p <= G - 1; ++p)
        for (int q = 1; q <= (G - p) * K; ++q) out.emplace_back(p, q);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return FractionSet{std::move(out)};
}

Rational decomposition_dof_per_cell(const NetworkConfig& cfg) {
    const long long km = static_cast<long long>(cfg.K) * cfg.M;
    if (static_cast<long long>(cfg.G - 1) * km >= cfg.N)
        return Rational(km * cfg.N, km + cfg.N);
    // No scope for alignment: random transmit beamforming must leave all GKd
    // streams resolvable at each BS, so a cell carries min(KM, N/G).
    return rat_min(Rational(km), Rational(cfg.N, cfg.G));
}

Rational xnet_outer_bound(const NetworkConfig& cfg) {
    if (cfg.G < 2) throw GMustExceedOne("xnet_outer_bound: requires G >= 2");
    bool first = true;
    Rational best;
    for (int p = 1; p <= cfg.G - 1; ++p)
        for (int q = 1; q <= (cfg.G - p) * cfg.K; ++q) {
            const Rational cand =
                rat_max(Rational(static_cast<long long>(cfg.N) * p),
                        Rational(static_cast<long long>(cfg.M) * q)) /
                Rational(static_cast<long long>(cfg.K) * p + q);
            if (first || cand < best) {
                best = cand;
                first = false;
            }
        }
    return best;
}

Rational prior_outer_bound(const NetworkConfig& cfg) {
    const long long G = cfg.G, K = cfg.K, M = cfg.M, N = cfg.N;
    Rational b = rat_min(Rational(M), Rational(N, K));
    b = rat_min(b, Rational(std::max(K * M, (G - 1) * N), K + G - 1));
    b = rat_min(b, Rational(std::max(N, (G - 1) * M), K + G - 1));
    return b;
}

bool proper_test(const NetworkConfig& cfg, const DofDemand& d) {
    return static_cast<long long>(cfg.M) + cfg.N >=
           (static_cast<long long>(cfg.G) * cfg.K + 1) * d.d;
}

Rational proper_limit_per_user(const NetworkConfig& cfg) {
    return Rational(static_cast<long long>(cfg.M) + cfg.N,
                    static_cast<long long>(cfg.G) * cfg.K + 1);
}

Rational single_antenna_dof(const NetworkConfig& cfg) {
    if (cfg.M != 1) throw NotSingleAntenna("single_antenna_dof: requires M = 1");
    const long long G = cfg.G, K = cfg.K, N = cfg.N;
    if (N < (G - 1) * K) return Rational(N, N + K);
    if (N < G * K) return Rational(N, G * K);
    return Rational(1);
}

Rational f_omega(const Rational& omega, int K, int M, int N) {
    const Rational denom = Rational(K) * omega + Rational(1);
    return rat_max(Rational(N) * omega, Rational(M)) / denom;
}

Rational optimal_sdof_two_cell(int K, int M, int N) {
    if (K != 2 && K != 3) throw UnsupportedK("optimal_sdof_two_cell: K must be 2 or 3");
    // Trivial per-user caps: the BS antenna share N/K and the user antennas M.
    Rational d = rat_min(Rational(N, K), Rational(M));
    if (K == 2) {
        d = rat_min(d, f_omega(Rational(1, 2), K, M, N));
        d = rat_min(d, f_omega(Rational(1), K, M, N));
    } else {
        d = rat_min(d, f_omega(Rational(1, 3), K, M, N));
        d = rat_min(d, f_omega(Rational(1, 2), K, M, N));
        d = rat_min(d, f_omega(Rational(2, 3), K, M, N));
        d = rat_min(d, f_omega(Rational(1), K, M, N));
    }
    return d;
}

std::optional<Rational> two_cell_partial_general_K(int K, int M, int N) {
    if (K < 2) return std::nullopt;
    const Rational gamma(M, N);
    if (gamma <= Rational(1, K - 1)) {
        Rational v = rat_min(Rational(M), rat_max(Rational(N, 2LL * K), Rational(M, 2)));
        return rat_min(v, Rational(N, 2LL * K - 1));
    }
    if (gamma >= Rational(K, K + 1)) {
        Rational v = rat_max(Rational(N, K + 1), Rational(M, K + 1));
        return rat_min(v, Rational(N, K));
    }
    return std::nullopt;
}

GammaCritical gamma_critical(int G, int K) {
    if (G < 2 || K < 1) throw std::invalid_argument("gamma_critical: G >= 2, K >= 1");
    const long long b = static_cast<long long>(K) * (G - 1);
    const long long disc = b * b - 4LL * K;
    if (disc < 0)
        throw NoRealRoots("gamma_critical: decomposition never meets the proper boundary");

    const double sd = std::sqrt(static_cast<double>(disc));
    GammaCritical out;
    out.left.value = (static_cast<double>(b) - sd) / (2.0 * K);
    out.right.value = (static_cast<double>(b) + sd) / (2.0 * K);

    const long long isq = static_cast<long long>(std::llround(sd));
    if (isq * isq == disc) {
        out.left.exact = Rational(b - isq, 2LL * K);
        out.right.exact = Rational(b + isq, 2LL * K);
        out.left.value = out.left.exact->to_double();
        out.right.value = out.right.exact->to_double();
    }
    return out;
}

bool usap_uplink_necessary(const NetworkConfig& cfg, const DofDemand& d) {
    const long long L = static_cast<long long>(cfg.G) * cfg.K * d.d - cfg.N;
    return L * cfg.N < static_cast<long long>(cfg.K) * cfg.M * d.d;
}

bool usap_downlink_necessary(const NetworkConfig& cfg, const DofDemand& d) {
    const long long GK = static_cast<long long>(cfg.G) * cfg.K;
    return GK * (GK * d.d - cfg.M) * cfg.M < GK * d.d * cfg.N;
}

Rational mac_bc_bound(const NetworkConfig& cfg) {
    return rat_min(Rational(cfg.M), Rational(cfg.N, cfg.K));
}

BoundReport bound_report(const NetworkConfig& cfg) {
    BoundReport rep;
    rep.decomposition_inner = decomposition_dof_per_cell(cfg) / Rational(cfg.K);
    if (cfg.G >= 2) rep.xnet_outer = xnet_outer_bound(cfg);
    rep.prior_outer = prior_outer_bound(cfg);
    rep.proper_limit = proper_limit_per_user(cfg);
    rep.mac_bc = mac_bc_bound(cfg);

    if (cfg.G == 2 && (cfg.K == 2 || cfg.K == 3)) {
        rep.closed_form_optimal = optimal_sdof_two_cell(cfg.K, cfg.M, cfg.N);
    } else if (cfg.M == 1 && cfg.G >= 2) {
        rep.closed_form_optimal = single_antenna_dof(cfg);
    } else if (cfg.G >= 2 && fraction_set(cfg.G, cfg.K).contains(cfg.gamma())) {
        rep.closed_form_optimal = Rational(static_cast<long long>(cfg.M) * cfg.N,
                                           static_cast<long long>(cfg.K) * cfg.M + cfg.N);
    } else if (cfg.G == 2) {
        rep.closed_form_optimal = two_cell_partial_general_K(cfg.K, cfg.M, cfg.N);
    }
    return rep;
}

}  // namespace cellia
