#include "cellia/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cellia/bounds.hpp"
#include "cellia/errors.hpp"
#include "cellia/random.hpp"
#include "cellia/structured.hpp"

namespace cellia {

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::UsapUplink: return "usap-uplink";
        case Scheme::UsapDownlink: return "usap-downlink";
        case Scheme::Structured: return "structured";
        case Scheme::BoundsOnly: return "bounds-only";
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_string(const std::string& s) {
    if (s == "usap-uplink") return Scheme::UsapUplink;
    if (s == "usap-downlink") return Scheme::UsapDownlink;
    if (s == "structured") return Scheme::Structured;
    if (s == "bounds-only") return Scheme::BoundsOnly;
    return std::nullopt;
}

namespace {

void validate_spec(const SweepSpec& spec) {
    if (spec.G < 1 || spec.K < 1) throw std::invalid_argument("SweepSpec: G, K must be >= 1");
    if (spec.M_max < 1 || spec.N_max < 1 || spec.M_max > 200 || spec.N_max > 200)
        throw std::invalid_argument("SweepSpec: M_max, N_max must lie in 1..200");
    if (spec.seeds < 1) throw std::invalid_argument("SweepSpec: seeds must be >= 1");
}

std::uint64_t point_key(const SweepSpec& spec, int M, int N, int d) {
    const std::uint64_t packed = (static_cast<std::uint64_t>(M) << 40) |
                                 (static_cast<std::uint64_t>(N) << 20) |
                                 static_cast<std::uint64_t>(d);
    return mix_seed(spec.base_seed ^ mix_seed(packed));
}

}  // namespace

std::uint64_t trial_channel_seed(const SweepSpec& spec, int M, int N, int d, int trial) {
    return mix_seed(point_key(spec, M, N, d) ^ (0xC0FFEEULL + 2 * trial));
}

std::uint64_t trial_scheme_seed(const SweepSpec& spec, int M, int N, int d, int trial) {
    return mix_seed(point_key(spec, M, N, d) ^ (0x5EED00ULL + 2 * trial + 1));
}

std::vector<std::tuple<int, int, int>> enumerate_grid(const SweepSpec& spec) {
    validate_spec(spec);
    std::vector<std::tuple<int, int, int>> out;
    const long long GK = static_cast<long long>(spec.G) * spec.K;
    for (int M = 1; M <= spec.M_max; ++M)
        for (int N = 1; N <= spec.N_max; ++N) {
            const int dmax = static_cast<int>(
                std::min<long long>(M, std::min<long long>(N / spec.K, (M + N) / (GK + 1))));
            for (int d = 1; d <= dmax; ++d) {
                const NetworkConfig cfg(spec.G, spec.K, M, N);
                const DofDemand dem(d);
                const long long L = GK * d - N;
                if (L <= 0) continue;
                if (!usap_uplink_necessary(cfg, dem)) continue;
                if (M >= GK * d) continue;
                if (std::gcd(std::gcd(M, N), d) != 1) continue;
                if (!proper_test(cfg, dem)) continue;
                out.emplace_back(M, N, d);
            }
        }
    return out;
}

namespace {

SweepRecord run_point(const SweepSpec& spec, int M, int N, int d) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepRecord rec;
    rec.G = spec.G;
    rec.K = spec.K;
    rec.M = M;
    rec.N = N;
    rec.d = d;
    rec.gamma = Rational(M, N);
    rec.d_over_N = Rational(d, N);
    rec.seeds = spec.seeds;
    rec.scheme = to_string(spec.scheme);
    rec.min_sv = 1.0;

    std::vector<std::string> trial_statuses;
    for (int trial = 0; trial < spec.seeds; ++trial) {
        const std::uint64_t chseed = trial_channel_seed(spec, M, N, d, trial);
        const std::uint64_t sseed = trial_scheme_seed(spec, M, N, d, trial);
        std::string trial_status;
        switch (spec.scheme) {
            case Scheme::UsapUplink:
            case Scheme::UsapDownlink: {
                const ChannelSet ch = generate_channels(NetworkConfig(spec.G, spec.K, M, N), chseed);
                const UsapOutcome out = spec.scheme == Scheme::UsapUplink
                                            ? usap_uplink(ch, d, sseed)
                                            : usap_downlink(ch, d, sseed);
                trial_status = to_string(out.status);
                rec.residual = std::max(rec.residual, out.diag.residual);
                if (out.status == UsapStatus::Success)
                    rec.min_sv = std::min(rec.min_sv, out.diag.pit_min_sv);
                break;
            }
            case Scheme::Structured: {
                try {
                    const StructuredDesign design =
                        build_two_cell_design(NetworkConfig(spec.G, spec.K, M, N), chseed);
                    rec.d = design.beams.d();
                    rec.d_over_N = design.per_user_dof / Rational(N);
                    trial_status = "Success";
                } catch (const Error&) {
                    trial_status = "Failed";
                }
                break;
            }
            case Scheme::BoundsOnly: {
                rec.d_over_N = decomposition_dof_per_cell(NetworkConfig(spec.G, spec.K, M, N)) /
                               Rational(static_cast<long long>(spec.K) * N);
                trial_status = "Success";
                break;
            }
        }
        trial_statuses.push_back(trial_status);
    }
    const bool unanimous = std::all_of(trial_statuses.begin(), trial_statuses.end(),
                                       [&](const std::string& s) { return s == trial_statuses[0]; });
    if (unanimous) {
        rec.status = trial_statuses[0];
    } else {
        rec.status = "Mixed";
        for (const auto& s : trial_statuses) rec.status += ":" + s;
    }
    if (rec.min_sv == 1.0 && rec.status != "Success") rec.min_sv = 0.0;
    rec.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return rec;
}

std::string job_key(int M, int N, int d, const std::string& scheme) {
    return std::to_string(M) + "," + std::to_string(N) + "," + std::to_string(d) + "," + scheme;
}

nlohmann::json record_to_json(const SweepRecord& r, int job_d) {
    return nlohmann::json{{"G", r.G},
                          {"K", r.K},
                          {"M", r.M},
                          {"N", r.N},
                          {"d", r.d},
                          {"job_d", job_d},
                          {"gamma", {r.gamma.num(), r.gamma.den()}},
                          {"dN", {r.d_over_N.num(), r.d_over_N.den()}},
                          {"status", r.status},
                          {"seeds", r.seeds},
                          {"residual", r.residual},
                          {"min_sv", r.min_sv},
                          {"time_ms", r.time_ms},
                          {"scheme", r.scheme}};
}

std::pair<SweepRecord, int> record_from_json(const nlohmann::json& j) {
    SweepRecord r;
    r.G = j.at("G").get<int>();
    r.K = j.at("K").get<int>();
    r.M = j.at("M").get<int>();
    r.N = j.at("N").get<int>();
    r.d = j.at("d").get<int>();
    r.gamma = Rational(j.at("gamma")[0].get<long long>(), j.at("gamma")[1].get<long long>());
    r.d_over_N = Rational(j.at("dN")[0].get<long long>(), j.at("dN")[1].get<long long>());
    r.status = j.at("status").get<std::string>();
    r.seeds = j.at("seeds").get<int>();
    r.residual = j.at("residual").get<double>();
    r.min_sv = j.at("min_sv").get<double>();
    r.time_ms = j.at("time_ms").get<double>();
    r.scheme = j.at("scheme").get<std::string>();
    return {r, j.value("job_d", r.d)};
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    validate_spec(spec);

    std::map<std::string, SweepRecord> done;
    if (!spec.checkpoint.empty() && std::filesystem::exists(spec.checkpoint)) {
        std::ifstream in(spec.checkpoint);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto [r, job_d] = record_from_json(nlohmann::json::parse(line));
            done[job_key(r.M, r.N, job_d, r.scheme)] = r;
        }
    }

    // For usap schemes each admissible (M,N,d) is a job; the structured and
    // bounds-only schemes run once per (M,N).
    std::vector<std::tuple<int, int, int>> jobs;
    if (spec.scheme == Scheme::UsapUplink || spec.scheme == Scheme::UsapDownlink) {
        jobs = enumerate_grid(spec);
    } else {
        for (int M = 1; M <= spec.M_max; ++M)
            for (int N = 1; N <= spec.N_max; ++N) jobs.emplace_back(M, N, 0);
    }

    std::vector<SweepRecord> records(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex ckpt_mutex;
    std::ofstream ckpt;
    if (!spec.checkpoint.empty()) ckpt.open(spec.checkpoint, std::ios::app);

    const unsigned n_threads =
        spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
    auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= jobs.size()) return;
            const auto [M, N, d] = jobs[idx];
            const auto it = done.find(job_key(M, N, d, to_string(spec.scheme)));
            if (it != done.end()) {
                records[idx] = it->second;
                continue;
            }
            SweepRecord rec = run_point(spec, M, N, d);
            if (!spec.checkpoint.empty()) {
                std::lock_guard<std::mutex> lock(ckpt_mutex);
                ckpt << record_to_json(rec, d).dump() << "\n";
                ckpt.flush();
            }
            records[idx] = std::move(rec);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
        return std::tie(a.M, a.N, a.d) < std::tie(b.M, b.N, b.d);
    });
    if (!spec.out.empty()) write_sweep_csv(spec.out, records);
    return records;
}

bool admissibility_recheck(const std::vector<SweepRecord>& recs, const SweepSpec& spec) {
    if (spec.scheme != Scheme::UsapUplink && spec.scheme != Scheme::UsapDownlink) return true;
    const long long GK = static_cast<long long>(spec.G) * spec.K;
    for (const auto& r : recs) {
        const NetworkConfig cfg(spec.G, spec.K, r.M, r.N);
        const DofDemand dem(r.d);
        const bool ok = GK * r.d - r.N > 0 && usap_uplink_necessary(cfg, dem) && r.d <= r.M &&
                        spec.K * r.d <= r.N && r.M < GK * r.d &&
                        std::gcd(std::gcd(r.M, r.N), r.d) == 1 && proper_test(cfg, dem);
        if (!ok) return false;
    }
    return true;
}

std::vector<std::pair<Rational, Rational>> extract_boundary(
    const std::vector<SweepRecord>& recs) {
    std::map<Rational, Rational> best;
    for (const auto& r : recs) {
        if (!r.success()) continue;
        auto it = best.find(r.gamma);
        if (it == best.end() || it->second < r.d_over_N) best[r.gamma] = r.d_over_N;
    }
    return {best.begin(), best.end()};
}

std::vector<std::tuple<int, int, int>> monotonicity_violations(
    const std::vector<SweepRecord>& recs) {
    std::map<std::pair<int, int>, std::vector<std::pair<int, bool>>> by_mn;
    for (const auto& r : recs) by_mn[{r.M, r.N}].emplace_back(r.d, r.success());
    std::vector<std::tuple<int, int, int>> out;
    for (auto& [mn, list] : by_mn) {
        std::sort(list.begin(), list.end());
        int largest_success = -1;
        for (const auto& [d, ok] : list)
            if (ok) largest_success = d;
        for (const auto& [d, ok] : list)
            if (!ok && d < largest_success) out.emplace_back(mn.first, mn.second, d);
    }
    return out;
}

std::vector<BoundCurveRow> emit_bound_curves(int G, int K, const std::vector<Rational>& gammas) {
    std::vector<BoundCurveRow> rows;
    rows.reserve(gammas.size());
    for (const Rational& g : gammas) {
        const long long a = g.num(), b = g.den();
        if (a <= 0) throw std::invalid_argument("emit_bound_curves: gamma must be positive");
        const NetworkConfig cfg(G, K, static_cast<int>(a), static_cast<int>(b));
        BoundCurveRow row;
        row.gamma = g;
        row.decomposition = decomposition_dof_per_cell(cfg) / Rational(K) / Rational(b);
        row.proper_limit = (g + Rational(1)) / Rational(static_cast<long long>(G) * K + 1);
        if (G >= 2) row.xnet_outer = xnet_outer_bound(cfg) / Rational(b);
        row.mac_bc = rat_min(g, Rational(1, K));
        if (Rational(G) > g)
            row.usap_uplink_gate = Rational(b, K * (G * b - a));
        if (static_cast<long long>(G) * K * a > b)
            row.usap_downlink_gate = Rational(a * a, b * (static_cast<long long>(G) * K * a - b));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Rational> gamma_grid(const Rational& gamma_max, int max_den) {
    std::vector<Rational> out;
    for (int q = 1; q <= max_den; ++q)
        for (int p = 1; Rational(p, q) <= gamma_max; ++p)
            if (std::gcd(p, q) == 1) out.emplace_back(p, q);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

}  // namespace

void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& recs) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_sweep_csv: cannot open " + path);
    out << "G,K,M,N,d,gamma_num,gamma_den,dN_num,dN_den,status,scheme,seeds,residual,min_sv,"
           "time_ms\n";
    for (const auto& r : recs) {
        out << r.G << ',' << r.K << ',' << r.M << ',' << r.N << ',' << r.d;
        out << ',' << r.gamma.num() << ',' << r.gamma.den();
        out << ',' << r.d_over_N.num() << ',' << r.d_over_N.den();
        out << ',' << r.status << ',' << r.scheme << ',' << r.seeds;
        out << ',' << fmt_double(r.residual) << ',' << fmt_double(r.min_sv);
        char tbuf[32];
        std::snprintf(tbuf, sizeof tbuf, "%.3f", r.time_ms);
        out << ',' << tbuf << "\n";
    }
}

void write_boundary_csv(const std::string& path,
                        const std::vector<std::pair<Rational, Rational>>& boundary) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_boundary_csv: cannot open " + path);
    out << "gamma_num,gamma_den,dN_num,dN_den\n";
    for (const auto& [g, dn] : boundary)
        out << g.num() << ',' << g.den() << ',' << dn.num() << ',' << dn.den() << "\n";
}

void write_curves_csv(const std::string& path, const std::vector<BoundCurveRow>& rows, int G,
                      int K) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_curves_csv: cannot open " + path);
    out << "G,K,gamma_num,gamma_den,decomp_num,decomp_den,proper_num,proper_den,xnet_num,"
           "xnet_den,macbc_num,macbc_den,usap_ul_num,usap_ul_den,usap_dl_num,usap_dl_den\n";
    auto opt = [](const std::optional<Rational>& r) {
        return r ? std::to_string(r->num()) + "," + std::to_string(r->den()) : ",";
    };
    for (const auto& r : rows) {
        out << G << ',' << K << ',' << r.gamma.num() << ',' << r.gamma.den();
        out << ',' << r.decomposition.num() << ',' << r.decomposition.den();
        out << ',' << r.proper_limit.num() << ',' << r.proper_limit.den();
        out << ',' << opt(r.xnet_outer);
        out << ',' << r.mac_bc.num() << ',' << r.mac_bc.den();
        out << ',' << opt(r.usap_uplink_gate);
        out << ',' << opt(r.usap_downlink_gate) << "\n";
    }
}

std::vector<SweepRecord> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_sweep_csv: cannot open " + path);
    std::vector<SweepRecord> out;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> f;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (f.size() != 15) throw std::runtime_error("read_sweep_csv: malformed row");
        SweepRecord r;
        r.G = std::stoi(f[0]);
        r.K = std::stoi(f[1]);
        r.M = std::stoi(f[2]);
        r.N = std::stoi(f[3]);
        r.d = std::stoi(f[4]);
        r.gamma = Rational(std::stoll(f[5]), std::stoll(f[6]));
        r.d_over_N = Rational(std::stoll(f[7]), std::stoll(f[8]));
        r.status = f[9];
        r.scheme = f[10];
        r.seeds = std::stoi(f[11]);
        r.residual = std::stod(f[12]);
        r.min_sv = std::stod(f[13]);
        r.time_ms = std::stod(f[14]);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace cellia
