#include "cellia/structured.hpp"

#include <numeric>
#include <stdexcept>

#include "cellia/errors.hpp"
#include "cellia/numerics.hpp"
#include "cellia/random.hpp"

namespace cellia {

namespace {

int other_cell(int cell) { return cell == 0 ? 1 : 0; }

// Smallest extension factor e with k | e*x.
int min_extension(int k, long long x) {
    const long long g = std::gcd(static_cast<long long>(k), x);
    return static_cast<int>(k / g);
}

void check_image_rank(const Eigen::MatrixXcd& image, int expected, const TolerancePolicy& pol,
                      const char* what) {
    if (expected == 0) {
        const double scale = std::max(1.0, image.rows() * std::sqrt(double(image.cols())));
        if (image.norm() > pol.residual_tol * scale)
            throw Error(std::string(what) + ": zero-forcing image is not numerically zero");
        return;
    }
    if (numerical_rank(image, pol) != expected)
        throw Error(std::string(what) + ": image rank differs from the packing ratio");
}

}  // namespace

EffectiveChannels::EffectiveChannels(const ChannelSet& ch,
                                     const std::vector<std::vector<Eigen::VectorXcd>>& designed,
                                     const TolerancePolicy& pol)
    : cfg_(ch.config()) {
    const std::size_t users = static_cast<std::size_t>(cfg_.G) * cfg_.K;
    if (designed.size() != users)
        throw std::invalid_argument("EffectiveChannels: expected one list per user");

    w_.resize(users);
    for (std::size_t u = 0; u < users; ++u) {
        const auto& cols = designed[u];
        if (cols.empty()) {
            w_[u] = Eigen::MatrixXcd::Identity(cfg_.M, cfg_.M);
            continue;
        }
        if (static_cast<int>(cols.size()) >= cfg_.M)
            throw RankDeficientInput("EffectiveChannels: user has no unused directions left");
        Eigen::MatrixXcd v(cfg_.M, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) v.col(c) = cols[c];
        w_[u] = orth_complement(v, pol);
    }

    h_.resize(users * cfg_.G);
    for (int j = 0; j < cfg_.G; ++j)
        for (int l = 0; l < cfg_.K; ++l)
            for (int i = 0; i < cfg_.G; ++i)
                h_[static_cast<std::size_t>((j * cfg_.K + l) * cfg_.G + i)] =
                    ch.H(j, l, i) * w_[static_cast<std::size_t>(j) * cfg_.K + l];
}

const Eigen::MatrixXcd& EffectiveChannels::H(int j, int l, int i) const {
    return h_[static_cast<std::size_t>((j * cfg_.K + l) * cfg_.G + i)];
}

const Eigen::MatrixXcd& EffectiveChannels::W(int j, int l) const {
    return w_[static_cast<std::size_t>(j) * cfg_.K + l];
}

int EffectiveChannels::effective_dim(int j, int l) const {
    return static_cast<int>(W(j, l).cols());
}

EffectiveChannels restrict_complement(const ChannelSet& ch, const BeamformerSet& designed,
                                      const TolerancePolicy& pol) {
    const NetworkConfig& cfg = ch.config();
    if (designed.config() != cfg)
        throw std::invalid_argument("restrict_complement: config mismatch");
    std::vector<std::vector<Eigen::VectorXcd>> cols(static_cast<std::size_t>(cfg.G) * cfg.K);
    for (int i = 0; i < cfg.G; ++i)
        for (int j = 0; j < cfg.K; ++j) {
            const Eigen::MatrixXcd& v = designed.precoder(i, j);
            for (Eigen::Index c = 0; c < v.cols(); ++c)
                cols[static_cast<std::size_t>(i) * cfg.K + j].push_back(v.col(c));
        }
    return EffectiveChannels(ch, cols, pol);
}

std::vector<PackingSet> packing_2to1(const EffectiveChannels& eff, int cell,
                                     std::pair<int, int> pair, int count,
                                     const TolerancePolicy& pol) {
    const NetworkConfig& cfg = eff.config();
    if (cfg.G != 2) throw UnsupportedConfig("packing_2to1: two-cell networks only");
    const int bs = other_cell(cell);
    const auto [a, b] = pair;
    const int ma = eff.effective_dim(cell, a), mb = eff.effective_dim(cell, b);

    Eigen::MatrixXcd sys(cfg.N, ma + mb);
    sys << eff.H(cell, a, bs), eff.H(cell, b, bs);
    const Eigen::MatrixXcd null = nullspace_basis(sys, pol);
    if (count > null.cols())
        throw InsufficientOverlap("packing_2to1: only " + std::to_string(null.cols()) +
                                  " aligned pairs exist");

    std::vector<PackingSet> out;
    for (int t = 0; t < count; ++t) {
        PackingSet set{2, 1, {}};
        Eigen::VectorXcd va = eff.W(cell, a) * null.col(t).head(ma);
        Eigen::VectorXcd vb = eff.W(cell, b) * null.col(t).tail(mb);
        va.normalize();
        vb.normalize();
        Eigen::MatrixXcd image(cfg.N, 2);
        image << eff.H(cell, a, bs) * null.col(t).head(ma).normalized(),
            eff.H(cell, b, bs) * null.col(t).tail(mb).normalized();
        check_image_rank(image, 1, pol, "packing_2to1");
        set.members.emplace_back(a, std::move(va));
        set.members.emplace_back(b, std::move(vb));
        out.push_back(std::move(set));
    }
    return out;
}

std::vector<PackingSet> packing_3to2(const EffectiveChannels& eff, int cell, int count,
                                     const TolerancePolicy& pol) {
    const NetworkConfig& cfg = eff.config();
    if (cfg.G != 2 || cfg.K != 3) throw UnsupportedConfig("packing_3to2: needs G=2, K=3");
    const int bs = other_cell(cell);
    const int m0 = eff.effective_dim(cell, 0), m1 = eff.effective_dim(cell, 1),
              m2 = eff.effective_dim(cell, 2);

    Eigen::MatrixXcd sys(cfg.N, m0 + m1 + m2);
    sys << eff.H(cell, 0, bs), eff.H(cell, 1, bs), eff.H(cell, 2, bs);
    const Eigen::MatrixXcd null = nullspace_basis(sys, pol);
    if (count > null.cols())
        throw InsufficientOverlap("packing_3to2: only " + std::to_string(null.cols()) +
                                  " aligned triples exist");

    std::vector<PackingSet> out;
    for (int t = 0; t < count; ++t) {
        PackingSet set{3, 2, {}};
        Eigen::MatrixXcd image(cfg.N, 3);
        const int offs[4] = {0, m0, m0 + m1, m0 + m1 + m2};
        const int dims[3] = {m0, m1, m2};
        for (int u = 0; u < 3; ++u) {
            const Eigen::VectorXcd x = null.col(t).segment(offs[u], dims[u]);
            image.col(u) = eff.H(cell, u, bs) * x.normalized();
            Eigen::VectorXcd v = eff.W(cell, u) * x;
            v.normalize();
            set.members.emplace_back(u, std::move(v));
        }
        check_image_rank(image, 2, pol, "packing_3to2");
        out.push_back(std::move(set));
    }
    return out;
}

std::vector<PackingSet> packing_3to1(const EffectiveChannels& eff, int cell, int count,
                                     const TolerancePolicy& pol) {
    const NetworkConfig& cfg = eff.config();
    if (cfg.G != 2 || cfg.K != 3) throw UnsupportedConfig("packing_3to1: needs G=2, K=3");
    const int bs = other_cell(cell);
    const int m0 = eff.effective_dim(cell, 0), m1 = eff.effective_dim(cell, 1),
              m2 = eff.effective_dim(cell, 2);

    // Two chained pair constraints make all three images colinear.
    Eigen::MatrixXcd sys = Eigen::MatrixXcd::Zero(2 * cfg.N, m0 + m1 + m2);
    sys.block(0, 0, cfg.N, m0) = eff.H(cell, 0, bs);
    sys.block(0, m0, cfg.N, m1) = eff.H(cell, 1, bs);
    sys.block(cfg.N, m0, cfg.N, m1) = eff.H(cell, 1, bs);
    sys.block(cfg.N, m0 + m1, cfg.N, m2) = eff.H(cell, 2, bs);
    const Eigen::MatrixXcd null = nullspace_basis(sys, pol);
    if (count > null.cols())
        throw InsufficientOverlap("packing_3to1: only " + std::to_string(null.cols()) +
                                  " aligned triples exist");

    std::vector<PackingSet> out;
    for (int t = 0; t < count; ++t) {
        PackingSet set{3, 1, {}};
        Eigen::MatrixXcd image(cfg.N, 3);
        const int offs[3] = {0, m0, m0 + m1};
        const int dims[3] = {m0, m1, m2};
        for (int u = 0; u < 3; ++u) {
            const Eigen::VectorXcd x = null.col(t).segment(offs[u], dims[u]);
            image.col(u) = eff.H(cell, u, bs) * x.normalized();
            Eigen::VectorXcd v = eff.W(cell, u) * x;
            v.normalize();
            set.members.emplace_back(u, std::move(v));
        }
        check_image_rank(image, 1, pol, "packing_3to1");
        out.push_back(std::move(set));
    }
    return out;
}

std::vector<PackingSet> zero_force_set(const EffectiveChannels& eff, int cell, int user,
                                       int count, const TolerancePolicy& pol) {
    const NetworkConfig& cfg = eff.config();
    if (cfg.G != 2) throw UnsupportedConfig("zero_force_set: two-cell networks only");
    const int bs = other_cell(cell);
    const Eigen::MatrixXcd null = nullspace_basis(eff.H(cell, user, bs), pol);
    if (count > null.cols())
        throw InsufficientNullspace("zero_force_set: cross channel nullspace has only " +
                                    std::to_string(null.cols()) + " dimensions");

    std::vector<PackingSet> out;
    for (int t = 0; t < count; ++t) {
        PackingSet set{1, 0, {}};
        check_image_rank(eff.H(cell, user, bs) * null.col(t), 0, pol, "zero_force_set");
        Eigen::VectorXcd v = eff.W(cell, user) * null.col(t);
        v.normalize();
        set.members.emplace_back(user, std::move(v));
        out.push_back(std::move(set));
    }
    return out;
}

namespace {

// One stage of a table row. Counts are in extended units.
struct Stage {
    enum Kind { Random, ZeroForce, Pair21, Triple32, Triple31 } kind;
    int per_user{0};   // Random/ZeroForce: beamformers per user
    int per_pair{0};   // Pair21: sets per user pair
    int per_cell{0};   // Triple32/Triple31: sets per cell
};

struct Recipe {
    int extension{1};
    int demand{0};  // streams per user, extended units
    std::vector<Stage> stages;
};

Recipe two_user_recipe(int M, int N) {
    const Rational g(M, N);
    Recipe r;
    if (g < Rational(1, 4)) {
        r.extension = 1;
        r.demand = M;
        r.stages.push_back({Stage::Random, M, 0, 0});
    } else if (g <= Rational(1, 2)) {
        r.extension = min_extension(4, N);
        r.demand = r.extension * N / 4;
        r.stages.push_back({Stage::Random, r.demand, 0, 0});
    } else if (g < Rational(2, 3)) {
        const int e = r.extension = min_extension(2, M);
        r.demand = e * M / 2;
        r.stages.push_back({Stage::Pair21, 0, e * (2 * M - N), 0});
        r.stages.push_back({Stage::Random, e * (2 * N - 3 * M) / 2, 0, 0});
    } else if (g <= Rational(1)) {
        const int e = r.extension = min_extension(3, N);
        r.demand = e * N / 3;
        r.stages.push_back({Stage::Pair21, 0, e * N / 3, 0});
    } else if (g < Rational(3, 2)) {
        const int e = r.extension = min_extension(3, M);
        r.demand = e * M / 3;
        r.stages.push_back({Stage::ZeroForce, e * (M - N), 0, 0});
        r.stages.push_back({Stage::Pair21, 0, e * (3 * N - 2 * M) / 3, 0});
    } else {
        const int e = r.extension = min_extension(2, N);
        r.demand = e * N / 2;
        r.stages.push_back({Stage::ZeroForce, r.demand, 0, 0});
    }
    return r;
}

Recipe three_user_recipe(int M, int N) {
    const Rational g(M, N);
    Recipe r;
    if (g < Rational(1, 6)) {
        r.extension = 1;
        r.demand = M;
        r.stages.push_back({Stage::Random, M, 0, 0});
    } else if (g <= Rational(1, 3)) {
        const int e = r.extension = min_extension(6, N);
        r.demand = e * N / 6;
        r.stages.push_back({Stage::Random, r.demand, 0, 0});
    } else if (g < Rational(2, 5)) {
        const int e = r.extension = min_extension(2, M);
        r.demand = e * M / 2;
        r.stages.push_back({Stage::Triple32, 0, 0, e * (3 * M - N)});
        r.stages.push_back({Stage::Random, e * (2 * N - 5 * M) / 2, 0, 0});
    } else if (g <= Rational(1, 2)) {
        const int e = r.extension = min_extension(5, N);
        r.demand = e * N / 5;
        r.stages.push_back({Stage::Triple32, 0, 0, r.demand});
    } else if (g < Rational(5, 9)) {
        const int e = r.extension = min_extension(5, M);
        r.demand = 2 * e * M / 5;
        r.stages.push_back({Stage::Pair21, 0, e * (2 * M - N), 0});
        r.stages.push_back({Stage::Triple32, 0, 0, e * (10 * N - 18 * M) / 5});
    } else if (g <= Rational(2, 3)) {
        const int e = r.extension = min_extension(9, N);
        r.demand = 2 * e * N / 9;
        r.stages.push_back({Stage::Pair21, 0, e * N / 9, 0});
    } else if (g < Rational(3, 4)) {
        const int e = r.extension = min_extension(3, M);
        r.demand = e * M / 3;
        r.stages.push_back({Stage::Triple31, 0, 0, e * (3 * M - 2 * N)});
        r.stages.push_back({Stage::Pair21, 0, e * (3 * N - 4 * M) / 3, 0});
    } else if (g <= Rational(1)) {
        const int e = r.extension = min_extension(4, N);
        r.demand = e * N / 4;
        r.stages.push_back({Stage::Triple31, 0, 0, r.demand});
    } else if (g < Rational(4, 3)) {
        const int e = r.extension = min_extension(4, M);
        r.demand = e * M / 4;
        r.stages.push_back({Stage::ZeroForce, e * (M - N), 0, 0});
        r.stages.push_back({Stage::Triple31, 0, 0, e * (4 * N - 3 * M) / 4});
    } else {
        const int e = r.extension = min_extension(3, N);
        r.demand = e * N / 3;
        r.stages.push_back({Stage::ZeroForce, r.demand, 0, 0});
    }
    return r;
}

struct LedgerBuilder {
    std::vector<LedgerEntry> entries;

    void add(int s, int t, int count, int available) {
        if (count == 0) return;
        for (auto& e : entries)
            if (e.s == s && e.t == t) {
                e.count += count;
                e.available += available;
                return;
            }
        entries.push_back({s, t, count, available});
    }
};

}  // namespace

StructuredDesign build_two_cell_design(const NetworkConfig& cfg, std::uint64_t seed,
                                       const TolerancePolicy& pol) {
    if (cfg.G != 2 || (cfg.K != 2 && cfg.K != 3))
        throw UnsupportedConfig("build_two_cell_design: needs G=2 and K in {2,3}");

    const Recipe recipe =
        cfg.K == 2 ? two_user_recipe(cfg.M, cfg.N) : three_user_recipe(cfg.M, cfg.N);
    if (recipe.extension > 45)
        throw UnsupportedConfig("build_two_cell_design: extension factor exceeds cap");

    const NetworkConfig ext = spatially_extend(cfg, recipe.extension);
    const ChannelSet ch = generate_channels(ext, seed);
    GaussianStream rng(mix_seed(seed ^ 0x57C7ULL));

    const int K = ext.K;
    std::vector<std::vector<Eigen::VectorXcd>> cols(static_cast<std::size_t>(2) * K);
    auto user_slot = [K](int cell, int user) { return static_cast<std::size_t>(cell) * K + user; };
    auto adopt = [&](const std::vector<PackingSet>& sets, int cell) {
        for (const auto& set : sets)
            for (const auto& [user, v] : set.members) cols[user_slot(cell, user)].push_back(v);
    };

    static const std::vector<std::pair<int, int>> kPairs2 = {{0, 1}};
    static const std::vector<std::pair<int, int>> kPairs3 = {{0, 1}, {0, 2}, {1, 2}};
    const auto& pairs = K == 2 ? kPairs2 : kPairs3;

    // Ledger counts follow the tables' convention: sets per cell.
    LedgerBuilder ledger;
    for (const Stage& st : recipe.stages) {
        const EffectiveChannels eff(ch, cols, pol);
        switch (st.kind) {
            case Stage::Random:
                for (int cell = 0; cell < 2; ++cell)
                    for (int u = 0; u < K; ++u)
                        for (int t = 0; t < st.per_user; ++t)
                            cols[user_slot(cell, u)].push_back(rng.vector(ext.M).normalized());
                ledger.add(1, 1, K * st.per_user, K * st.per_user);
                break;
            case Stage::ZeroForce:
                for (int cell = 0; cell < 2; ++cell)
                    for (int u = 0; u < K; ++u) {
                        auto sets = zero_force_set(eff, cell, u, st.per_user, pol);
                        adopt(sets, cell);
                    }
                ledger.add(1, 0, K * st.per_user, K * (eff.effective_dim(0, 0) - ext.N));
                break;
            case Stage::Pair21:
                for (int cell = 0; cell < 2; ++cell)
                    for (const auto& pr : pairs) {
                        auto sets = packing_2to1(eff, cell, pr, st.per_pair, pol);
                        adopt(sets, cell);
                    }
                ledger.add(2, 1, static_cast<int>(pairs.size()) * st.per_pair,
                           static_cast<int>(pairs.size()) *
                               (eff.effective_dim(0, 0) + eff.effective_dim(0, 1) - ext.N));
                break;
            case Stage::Triple32:
                for (int cell = 0; cell < 2; ++cell) {
                    auto sets = packing_3to2(eff, cell, st.per_cell, pol);
                    adopt(sets, cell);
                }
                ledger.add(3, 2, st.per_cell,
                           eff.effective_dim(0, 0) + eff.effective_dim(0, 1) +
                               eff.effective_dim(0, 2) - ext.N);
                break;
            case Stage::Triple31:
                for (int cell = 0; cell < 2; ++cell) {
                    auto sets = packing_3to1(eff, cell, st.per_cell, pol);
                    adopt(sets, cell);
                }
                ledger.add(3, 1, st.per_cell,
                           eff.effective_dim(0, 0) + eff.effective_dim(0, 1) +
                               eff.effective_dim(0, 2) - 2 * ext.N);
                break;
        }
    }

    std::vector<Eigen::MatrixXcd> precoders(cols.size());
    for (std::size_t u = 0; u < cols.size(); ++u) {
        if (static_cast<int>(cols[u].size()) != recipe.demand)
            throw std::logic_error("build_two_cell_design: per-user share mismatch");
        Eigen::MatrixXcd v(ext.M, recipe.demand);
        for (std::size_t c = 0; c < cols[u].size(); ++c) v.col(c) = cols[u][c];
        precoders[u] = std::move(v);
    }

    BeamformerSet beams(ext, recipe.demand, std::move(precoders));
    if (!beams.assert_stream_ranks(pol))
        throw Error("build_two_cell_design: a user's beamformers are rank deficient");
    AlignmentReport report = verify_alignment(ch, beams, pol);
    if (!report.pass) throw Error("build_two_cell_design: alignment verification failed");

    return StructuredDesign{recipe.extension, std::move(beams), std::move(ledger.entries),
                            Rational(recipe.demand, recipe.extension), std::move(report)};
}

}  // namespace cellia
