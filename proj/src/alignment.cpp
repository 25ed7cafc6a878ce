#include "cellia/alignment.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "cellia/errors.hpp"

namespace cellia {

namespace {

// Orthonormal basis of the complement of span(B) in C^N; identity when B is
// empty. B need not have independent columns.
Eigen::MatrixXcd complement_of_span(const Eigen::MatrixXcd& b, int n,
                                    const TolerancePolicy& pol) {
    if (b.cols() == 0 || b.norm() == 0.0) return Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd basis = range_basis(b, pol);
    if (basis.cols() == n) return Eigen::MatrixXcd(n, 0);
    return orth_complement(basis, pol);
}

// Upper bound on the norm any interference column at BS i can reach, so
// zero-forced columns can be told apart from aligned ones. A rank decision
// relative to the interference matrix's own largest singular value would
// report full rank for an all-zero-forced R_i.
double interference_scale(const ChannelSet& ch, const BeamformerSet& bf, int i) {
    const NetworkConfig& cfg = ch.config();
    double s = 0.0;
    for (int j = 0; j < cfg.G; ++j) {
        if (j == i) continue;
        for (int l = 0; l < cfg.K; ++l) {
            const double vmax = bf.precoder(j, l).colwise().norm().maxCoeff();
            s = std::max(s, ch.H(j, l, i).norm() * vmax);
        }
    }
    return std::max(s, 1e-300);
}

// Columns at or below the residual tolerance (relative to `scale`) are
// numerically zero interference and do not count toward the rank.
Eigen::MatrixXcd drop_negligible_columns(const Eigen::MatrixXcd& r, double scale,
                                         const TolerancePolicy& pol) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < r.cols(); ++c)
        if (r.col(c).norm() > pol.residual_tol * scale) keep.push_back(c);
    Eigen::MatrixXcd out(r.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = r.col(keep[c]);
    return out;
}

// Receive filter for one user given the subspace its filter must avoid.
// Returns an N x d matrix, or as many columns as the direct link supports.
Eigen::MatrixXcd one_receive_filter(const Eigen::MatrixXcd& avoid, const Eigen::MatrixXcd& h,
                                    const Eigen::MatrixXcd& v, int n, int d,
                                    const TolerancePolicy& pol) {
    const Eigen::MatrixXcd c = complement_of_span(avoid, n, pol);
    if (c.cols() == 0) return Eigen::MatrixXcd(n, 0);
    const Eigen::MatrixXcd s = c.adjoint() * (h * v);  // projected direct link
    const Eigen::MatrixXcd sig = range_basis(s, pol);  // <= d orthonormal columns
    return c * sig.leftCols(std::min<Eigen::Index>(sig.cols(), d));
}

}  // namespace

BeamformerSet::BeamformerSet(NetworkConfig cfg, int d, std::vector<Eigen::MatrixXcd> precoders)
    : cfg_(cfg), d_(d), v_(std::move(precoders)) {
    if (d_ < 1) throw std::invalid_argument("BeamformerSet: d must be >= 1");
    if (v_.size() != static_cast<std::size_t>(cfg_.G) * cfg_.K)
        throw std::invalid_argument("BeamformerSet: expected G*K precoders");
    for (const auto& v : v_)
        if (v.rows() != cfg_.M || v.cols() != d_)
            throw std::invalid_argument("BeamformerSet: every precoder must be M x d");
}

const Eigen::MatrixXcd& BeamformerSet::precoder(int i, int j) const {
    if (i < 0 || i >= cfg_.G || j < 0 || j >= cfg_.K)
        throw std::out_of_range("BeamformerSet::precoder: index out of range");
    return v_[static_cast<std::size_t>(i) * cfg_.K + j];
}

bool BeamformerSet::assert_stream_ranks(const TolerancePolicy& pol) const {
    for (const auto& v : v_)
        if (numerical_rank(v, pol) != d_) return false;
    return true;
}

int AlignmentReport::max_interference_rank() const {
    return interference_rank.empty()
               ? 0
               : *std::max_element(interference_rank.begin(), interference_rank.end());
}

Eigen::MatrixXcd interference_matrix(const ChannelSet& ch, const BeamformerSet& bf, int i) {
    const NetworkConfig& cfg = ch.config();
    if (bf.config() != cfg) throw std::invalid_argument("interference_matrix: config mismatch");
    if (i < 0 || i >= cfg.G) throw std::out_of_range("interference_matrix: BS index");
    const int d = bf.d();
    Eigen::MatrixXcd r(cfg.N, static_cast<Eigen::Index>(cfg.G - 1) * cfg.K * d);
    Eigen::Index col = 0;
    for (int j = 0; j < cfg.G; ++j) {
        if (j == i) continue;
        for (int l = 0; l < cfg.K; ++l) {
            r.middleCols(col, d) = ch.H(j, l, i) * bf.precoder(j, l);
            col += d;
        }
    }
    return r;
}

AlignmentReport verify_alignment(const ChannelSet& ch, const BeamformerSet& bf,
                                 const TolerancePolicy& pol) {
    const NetworkConfig& cfg = ch.config();
    if (bf.config() != cfg) throw std::invalid_argument("verify_alignment: config mismatch");
    const int d = bf.d();

    AlignmentReport rep;
    rep.interference_rank.resize(cfg.G);
    rep.signal_interference_rank.resize(cfg.G);
    rep.interference_tail_svs.resize(cfg.G, {0.0, 0.0});
    rep.direct_rank.assign(static_cast<std::size_t>(cfg.G) * cfg.K, 0);
    rep.direct_min_sv.assign(static_cast<std::size_t>(cfg.G) * cfg.K, 0.0);

    bool pass = true;
    for (int i = 0; i < cfg.G; ++i) {
        const Eigen::MatrixXcd r_full = interference_matrix(ch, bf, i);
        const double scale = interference_scale(ch, bf, i);
        const Eigen::MatrixXcd r = drop_negligible_columns(r_full, scale, pol);
        rep.interference_rank[i] = r.cols() == 0 ? 0 : numerical_rank(r, pol);
        if (r_full.cols() > 0 && r_full.norm() > 0.0) {
            const Eigen::VectorXd sv = singular_values(r_full);
            rep.interference_tail_svs[i] = {sv(sv.size() - 1),
                                            sv.size() > 1 ? sv(sv.size() - 2) : sv(0)};
        }
        if (rep.interference_rank[i] > cfg.N - cfg.K * d) pass = false;

        Eigen::MatrixXcd signal(cfg.N, static_cast<Eigen::Index>(cfg.K) * d);
        for (int l = 0; l < cfg.K; ++l)
            signal.middleCols(static_cast<Eigen::Index>(l) * d, d) =
                ch.H(i, l, i) * bf.precoder(i, l);
        Eigen::MatrixXcd both(cfg.N, signal.cols() + r.cols());
        both << signal, r;
        rep.signal_interference_rank[i] = numerical_rank(both, pol);

        // Direct-link rank evaluated through an interim receive filter that
        // avoids interference and the other same-cell signal spaces.
        for (int j = 0; j < cfg.K; ++j) {
            Eigen::MatrixXcd avoid(cfg.N, r.cols() + static_cast<Eigen::Index>(cfg.K - 1) * d);
            Eigen::Index col = 0;
            avoid.middleCols(col, r.cols()) = r;
            col += r.cols();
            for (int l = 0; l < cfg.K; ++l) {
                if (l == j) continue;
                avoid.middleCols(col, d) = ch.H(i, l, i) * bf.precoder(i, l);
                col += d;
            }
            const Eigen::MatrixXcd u =
                one_receive_filter(avoid, ch.H(i, j, i), bf.precoder(i, j), cfg.N, d, pol);
            const std::size_t slot = static_cast<std::size_t>(i) * cfg.K + j;
            if (u.cols() == d) {
                const Eigen::MatrixXcd link = u.adjoint() * ch.H(i, j, i) * bf.precoder(i, j);
                rep.direct_rank[slot] = numerical_rank(link, pol);
                const Eigen::VectorXd sv = singular_values(link);
                rep.direct_min_sv[slot] = sv(sv.size() - 1);
            } else {
                rep.direct_rank[slot] = static_cast<int>(u.cols());
            }
            if (rep.direct_rank[slot] != d) pass = false;
        }
    }
    rep.pass = pass;
    return rep;
}

ReceiveFilterSet receive_filters(const ChannelSet& ch, const BeamformerSet& bf,
                                 const TolerancePolicy& pol) {
    const NetworkConfig& cfg = ch.config();
    if (bf.config() != cfg) throw std::invalid_argument("receive_filters: config mismatch");
    const int d = bf.d();

    ReceiveFilterSet out;
    out.U.resize(static_cast<std::size_t>(cfg.G) * cfg.K);
    for (int i = 0; i < cfg.G; ++i) {
        const Eigen::MatrixXcd r = drop_negligible_columns(
            interference_matrix(ch, bf, i), interference_scale(ch, bf, i), pol);
        const int ri = r.cols() == 0 ? 0 : numerical_rank(r, pol);
        if (ri > cfg.N - cfg.K * d)
            throw AlignmentViolated("receive_filters: interference rank exceeds N - Kd at BS " +
                                    std::to_string(i));
        for (int j = 0; j < cfg.K; ++j) {
            Eigen::MatrixXcd avoid(cfg.N, r.cols() + static_cast<Eigen::Index>(cfg.K - 1) * d);
            Eigen::Index col = 0;
            avoid.middleCols(col, r.cols()) = r;
            col += r.cols();
            for (int l = 0; l < cfg.K; ++l) {
                if (l == j) continue;
                avoid.middleCols(col, d) = ch.H(i, l, i) * bf.precoder(i, l);
                col += d;
            }
            Eigen::MatrixXcd u =
                one_receive_filter(avoid, ch.H(i, j, i), bf.precoder(i, j), cfg.N, d, pol);
            if (u.cols() != d)
                throw SignalCollapse("receive_filters: direct link of user (" +
                                     std::to_string(i) + "," + std::to_string(j) +
                                     ") spans fewer than d interference-free dimensions");
            const Eigen::MatrixXcd link = u.adjoint() * ch.H(i, j, i) * bf.precoder(i, j);
            if (numerical_rank(link, pol) != d)
                throw SignalCollapse("receive_filters: filtered direct link is rank deficient");
            out.U[static_cast<std::size_t>(i) * cfg.K + j] = std::move(u);
        }
    }
    return out;
}

}  // namespace cellia
