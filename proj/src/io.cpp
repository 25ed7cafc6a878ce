#include "cellia/io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace cellia {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXcd& m) {
    std::vector<double> re, im;
    re.reserve(m.size());
    im.reserve(m.size());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            re.push_back(m(i, j).real());
            im.push_back(m(i, j).imag());
        }
    return json{{"re", re}, {"im", im}};
}

Eigen::MatrixXcd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != static_cast<std::size_t>(rows * cols) || im.size() != re.size())
        throw std::runtime_error("matrix_from_json: size mismatch");
    Eigen::MatrixXcd m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r, ++k) m(r, c) = {re[k], im[k]};
    return m;
}

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return json::parse(in);
}

void save_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(1) << "\n";
}

}  // namespace

void write_channels_json(const std::string& path, const ChannelSet& ch) {
    const NetworkConfig& cfg = ch.config();
    json entries = json::array();
    for (int j = 0; j < cfg.G; ++j)
        for (int l = 0; l < cfg.K; ++l)
            for (int i = 0; i < cfg.G; ++i) {
                json e = matrix_to_json(ch.H(j, l, i));
                e["j"] = j;
                e["l"] = l;
                e["i"] = i;
                entries.push_back(std::move(e));
            }
    save_file(path, json{{"format", "cellia.channels.v1"},
                         {"G", cfg.G},
                         {"K", cfg.K},
                         {"M", cfg.M},
                         {"N", cfg.N},
                         {"seed", ch.seed()},
                         {"order", "column-major"},
                         {"entries", std::move(entries)}});
}

ChannelSet read_channels_json(const std::string& path) {
    const json j = load_file(path);
    if (j.at("format") != "cellia.channels.v1")
        throw std::runtime_error("read_channels_json: unknown format");
    const NetworkConfig cfg(j.at("G"), j.at("K"), j.at("M"), j.at("N"));
    std::vector<Eigen::MatrixXcd> entries(
        static_cast<std::size_t>(cfg.G) * cfg.K * cfg.G);
    for (const auto& e : j.at("entries")) {
        const int jj = e.at("j"), ll = e.at("l"), ii = e.at("i");
        entries.at(static_cast<std::size_t>((jj * cfg.K + ll) * cfg.G + ii)) =
            matrix_from_json(e, cfg.N, cfg.M);
    }
    return ChannelSet(cfg, j.at("seed").get<std::uint64_t>(), std::move(entries));
}

void write_beamformers_json(const std::string& path, const BeamformerSet& bf) {
    const NetworkConfig& cfg = bf.config();
    json mats = json::array();
    for (int i = 0; i < cfg.G; ++i)
        for (int jj = 0; jj < cfg.K; ++jj) {
            json e = matrix_to_json(bf.precoder(i, jj));
            e["i"] = i;
            e["j"] = jj;
            mats.push_back(std::move(e));
        }
    save_file(path, json{{"format", "cellia.beamformers.v1"},
                         {"G", cfg.G},
                         {"K", cfg.K},
                         {"M", cfg.M},
                         {"N", cfg.N},
                         {"d", bf.d()},
                         {"order", "column-major"},
                         {"V", std::move(mats)}});
}

void write_downlink_precoders_json(const std::string& path, const NetworkConfig& cfg, int d,
                                   const std::vector<Eigen::MatrixXcd>& precoders) {
    json mats = json::array();
    for (int i = 0; i < cfg.G; ++i)
        for (int jj = 0; jj < cfg.K; ++jj) {
            json e = matrix_to_json(precoders.at(static_cast<std::size_t>(i) * cfg.K + jj));
            e["i"] = i;
            e["j"] = jj;
            mats.push_back(std::move(e));
        }
    save_file(path, json{{"format", "cellia.beamformers.v1"},
                         {"direction", "downlink"},
                         {"G", cfg.G},
                         {"K", cfg.K},
                         {"M", cfg.M},
                         {"N", cfg.N},
                         {"d", d},
                         {"order", "column-major"},
                         {"rows", cfg.N},
                         {"V", std::move(mats)}});
}

BeamformerSet read_beamformers_json(const std::string& path) {
    const json j = load_file(path);
    if (j.at("format") != "cellia.beamformers.v1")
        throw std::runtime_error("read_beamformers_json: unknown format");
    const NetworkConfig cfg(j.at("G"), j.at("K"), j.at("M"), j.at("N"));
    const int d = j.at("d");
    std::vector<Eigen::MatrixXcd> mats(static_cast<std::size_t>(cfg.G) * cfg.K);
    for (const auto& e : j.at("V")) {
        const int i = e.at("i"), jj = e.at("j");
        mats.at(static_cast<std::size_t>(i) * cfg.K + jj) = matrix_from_json(e, cfg.M, d);
    }
    return BeamformerSet(cfg, d, std::move(mats));
}

std::string alignment_report_json(const AlignmentReport& rep) {
    json tails = json::array();
    for (const auto& t : rep.interference_tail_svs) tails.push_back({t[0], t[1]});
    const json j{{"pass", rep.pass},
                 {"interference_rank", rep.interference_rank},
                 {"signal_interference_rank", rep.signal_interference_rank},
                 {"direct_rank", rep.direct_rank},
                 {"interference_tail_svs", std::move(tails)},
                 {"direct_min_sv", rep.direct_min_sv}};
    return j.dump(1);
}

}  // namespace cellia
