#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cellia/bounds.hpp"
#include "cellia/errors.hpp"
#include "cellia/io.hpp"
#include "cellia/structured.hpp"
#include "cellia/sweep.hpp"
#include "cellia/usap.hpp"

namespace {

using nlohmann::json;
using namespace cellia;

json rational_json(const Rational& r) { return json{{"num", r.num()}, {"den", r.den()}, {"str", r.str()}}; }

json opt_rational_json(const std::optional<Rational>& r) {
    return r ? rational_json(*r) : json(nullptr);
}

int cmd_bounds(int G, int K, int M, int N, int d, bool grid, int Mmax, int Nmax,
               const std::string& out_path) {
    if (grid) {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot open " << out_path << "\n";
            return 1;
        }
        out << "G,K,M,N,gamma,inner,xnet_outer,prior_outer,proper_limit,mac_bc,closed_form\n";
        for (int m = 1; m <= Mmax; ++m)
            for (int n = 1; n <= Nmax; ++n) {
                const NetworkConfig cfg(G, K, m, n);
                const BoundReport rep = bound_report(cfg);
                out << G << ',' << K << ',' << m << ',' << n << ',' << cfg.gamma().to_double()
                    << ',' << rep.decomposition_inner.to_double() << ','
                    << (rep.xnet_outer ? rep.xnet_outer->to_double() : -1.0) << ','
                    << rep.prior_outer.to_double() << ',' << rep.proper_limit.to_double() << ','
                    << rep.mac_bc.to_double() << ','
                    << (rep.closed_form_optimal ? rep.closed_form_optimal->to_double() : -1.0)
                    << "\n";
            }
        return 0;
    }
    const NetworkConfig cfg(G, K, M, N);
    const BoundReport rep = bound_report(cfg);
    json j{{"config", {{"G", G}, {"K", K}, {"M", M}, {"N", N}}},
          {"decomposition_inner", rational_json(rep.decomposition_inner)},
          {"xnet_outer", opt_rational_json(rep.xnet_outer)},
          {"prior_outer", rational_json(rep.prior_outer)},
          {"proper_limit", rational_json(rep.proper_limit)},
          {"mac_bc", rational_json(rep.mac_bc)},
          {"closed_form_optimal", opt_rational_json(rep.closed_form_optimal)}};
    if (d > 0) j["proper"] = proper_test(cfg, DofDemand(d));
    std::cout << j.dump(1) << "\n";
    return 0;
}

json usap_outcome_json(const UsapOutcome& out) {
    return json{{"status", to_string(out.status)},
                {"diagnostics",
                 {{"residual", out.diag.residual},
                  {"pit_min_sv", out.diag.pit_min_sv},
                  {"pit_marginal", out.diag.pit_marginal},
                  {"pit_first_draw", out.diag.pit_first_draw},
                  {"redraws", out.diag.redraws},
                  {"rows", out.diag.rows},
                  {"cols", out.diag.cols},
                  {"min_direct_sv", out.diag.min_direct_sv}}}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DoF bounds and interference-aligned beamforming for MIMO cellular networks"};
    app.require_subcommand(1);

    // bounds
    int G = 2, K = 2, M = 1, N = 1, d = 0, Mmax = 24, Nmax = 24;
    bool grid = false;
    std::string out_path = "bounds.csv";
    auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate every DoF bound at one config");
    bounds_cmd->add_option("--G", G)->required();
    bounds_cmd->add_option("--K", K)->required();
    bounds_cmd->add_option("--M", M);
    bounds_cmd->add_option("--N", N);
    bounds_cmd->add_option("--d", d);
    bounds_cmd->add_flag("--grid", grid, "Emit a CSV over 1..Mmax x 1..Nmax instead");
    bounds_cmd->add_option("--Mmax", Mmax);
    bounds_cmd->add_option("--Nmax", Nmax);
    bounds_cmd->add_option("--out", out_path);

    // channels
    std::uint64_t ch_seed = 1;
    std::string ch_out = "channels.json";
    auto* channels_cmd = app.add_subcommand("channels", "Dump a seeded channel realization");
    channels_cmd->add_option("--G", G)->required();
    channels_cmd->add_option("--K", K)->required();
    channels_cmd->add_option("--M", M)->required();
    channels_cmd->add_option("--N", N)->required();
    channels_cmd->add_option("--seed", ch_seed);
    channels_cmd->add_option("--out", ch_out);

    // verify
    std::string verify_channels, verify_beams;
    auto* verify_cmd = app.add_subcommand("verify", "Check alignment of dumped beamformers");
    verify_cmd->add_option("--channels", verify_channels)->required();
    verify_cmd->add_option("--beamformers", verify_beams)->required();

    // structured
    std::uint64_t seed = 1;
    std::string dump_beams;
    auto* structured_cmd =
        app.add_subcommand("structured", "Packing-ratio design for two-cell networks");
    structured_cmd->add_option("--K", K)->required();
    structured_cmd->add_option("--M", M)->required();
    structured_cmd->add_option("--N", N)->required();
    structured_cmd->add_option("--seed", seed);
    structured_cmd->add_option("--dump-beamformers", dump_beams);

    // usap
    std::string direction = "uplink";
    std::uint64_t channel_seed = 1;
    auto* usap_cmd = app.add_subcommand("usap", "Unstructured aligned beamformer design");
    usap_cmd->add_option("--G", G)->required();
    usap_cmd->add_option("--K", K)->required();
    usap_cmd->add_option("--M", M)->required();
    usap_cmd->add_option("--N", N)->required();
    usap_cmd->add_option("--d", d)->required();
    usap_cmd->add_option("--direction", direction)->check(CLI::IsMember({"uplink", "downlink"}));
    usap_cmd->add_option("--seed", seed);
    usap_cmd->add_option("--channel-seed", channel_seed);
    usap_cmd->add_option("--dump-beamformers", dump_beams);

    // sweep
    SweepSpec spec;
    std::string scheme_name = "usap-uplink", resume;
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo feasibility sweep");
    sweep_cmd->add_option("--G", spec.G)->required();
    sweep_cmd->add_option("--K", spec.K)->required();
    sweep_cmd->add_option("--Mmax", spec.M_max);
    sweep_cmd->add_option("--Nmax", spec.N_max);
    sweep_cmd->add_option("--scheme", scheme_name)
        ->check(CLI::IsMember({"usap-uplink", "usap-downlink", "structured", "bounds-only"}));
    sweep_cmd->add_option("--seeds", spec.seeds);
    sweep_cmd->add_option("--base-seed", spec.base_seed);
    sweep_cmd->add_option("--threads", spec.threads);
    sweep_cmd->add_option("--out", spec.out)->required();
    sweep_cmd->add_option("--resume", resume, "Checkpoint JSONL (created if missing)");

    // bounds-curves
    int max_den = 60;
    double gamma_max = 3.0;
    auto* curves_cmd = app.add_subcommand("bounds-curves", "Plot-ready bound curves CSV");
    curves_cmd->add_option("--G", G)->required();
    curves_cmd->add_option("--K", K)->required();
    curves_cmd->add_option("--gamma-max", gamma_max);
    curves_cmd->add_option("--max-den", max_den);
    curves_cmd->add_option("--out", out_path)->required();

    // boundary
    std::string in_path;
    auto* boundary_cmd = app.add_subcommand("boundary", "Extract the success boundary of a sweep");
    boundary_cmd->add_option("--in", in_path)->required();
    boundary_cmd->add_option("--out", out_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (bounds_cmd->parsed()) return cmd_bounds(G, K, M, N, d, grid, Mmax, Nmax, out_path);

        if (channels_cmd->parsed()) {
            write_channels_json(ch_out, generate_channels(NetworkConfig(G, K, M, N), ch_seed));
            return 0;
        }

        if (verify_cmd->parsed()) {
            const ChannelSet ch = read_channels_json(verify_channels);
            const BeamformerSet bf = read_beamformers_json(verify_beams);
            const AlignmentReport rep = verify_alignment(ch, bf);
            std::cout << alignment_report_json(rep) << "\n";
            return rep.pass ? 0 : 2;
        }

        if (structured_cmd->parsed()) {
            const StructuredDesign design =
                build_two_cell_design(NetworkConfig(2, K, M, N), seed);
            json ledger = json::array();
            for (const auto& e : design.ledger)
                ledger.push_back({{"ratio", std::to_string(e.s) + ":" + std::to_string(e.t)},
                                  {"count", e.count},
                                  {"available", e.available}});
            json j{{"extension_factor", design.extension_factor},
                   {"ledger", std::move(ledger)},
                   {"achieved_dof", rational_json(design.per_user_dof)},
                   {"verification", json::parse(alignment_report_json(design.report))}};
            std::cout << j.dump(1) << "\n";
            if (!dump_beams.empty()) write_beamformers_json(dump_beams, design.beams);
            return 0;
        }

        if (usap_cmd->parsed()) {
            const ChannelSet ch = generate_channels(NetworkConfig(G, K, M, N), channel_seed);
            const UsapOutcome out = direction == "uplink" ? usap_uplink(ch, d, seed)
                                                          : usap_downlink(ch, d, seed);
            std::cout << usap_outcome_json(out).dump(1) << "\n";
            if (!dump_beams.empty()) {
                if (out.beams)
                    write_beamformers_json(dump_beams, *out.beams);
                else if (!out.downlink_precoders.empty())
                    write_downlink_precoders_json(dump_beams, ch.config(), d,
                                                  out.downlink_precoders);
            }
            return 0;
        }

        if (sweep_cmd->parsed()) {
            spec.scheme = *scheme_from_string(scheme_name);
            spec.checkpoint = resume;
            const auto records = run_sweep(spec);
            std::size_t successes = 0;
            for (const auto& r : records) successes += r.success();
            std::cerr << "sweep: " << records.size() << " points, " << successes
                      << " successes -> " << spec.out << "\n";
            for (const auto& [m, n, dd] : monotonicity_violations(records))
                std::cerr << "monotonicity violation at (M,N,d)=(" << m << "," << n << "," << dd
                          << ")\n";
            if (!admissibility_recheck(records, spec)) {
                std::cerr << "admissibility recheck failed\n";
                return 2;
            }
            return 0;
        }

        if (curves_cmd->parsed()) {
            // gamma grid capped at the requested maximum, denominator <= max_den
            long long num = static_cast<long long>(gamma_max * 1000.0);
            const auto gammas = gamma_grid(Rational(num, 1000), max_den);
            write_curves_csv(out_path, emit_bound_curves(G, K, gammas), G, K);
            return 0;
        }

        if (boundary_cmd->parsed()) {
            const auto records = read_sweep_csv(in_path);
            write_boundary_csv(out_path, extract_boundary(records));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
