#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cellia/network.hpp"
#include "cellia/random.hpp"
#include "cellia/numerics.hpp"

using namespace cellia;

TEST_CASE("config validation and gamma") {
    CHECK_THROWS(NetworkConfig(0, 2, 3, 4));
    CHECK_THROWS(NetworkConfig(2, 2, 3, 0));
    CHECK(NetworkConfig(2, 3, 2, 3).gamma() == Rational(2, 3));
    CHECK(NetworkConfig(2, 2, 4, 6).gamma() == Rational(2, 3));
}

TEST_CASE("channel generation shape and dimensions") {
    const auto ch = generate_channels(NetworkConfig(2, 2, 3, 4), 7);
    CHECK(ch.count() == 8);
    for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l)
            for (int i = 0; i < 2; ++i) {
                CHECK(ch.H(j, l, i).rows() == 4);
                CHECK(ch.H(j, l, i).cols() == 3);
                CHECK(numerical_rank(ch.H(j, l, i)) == 3);
            }

    const auto ch3 = generate_channels(NetworkConfig(3, 2, 3, 4), 1);
    CHECK(ch3.count() == 18);
}

TEST_CASE("determinism in (config, seed)") {
    const NetworkConfig cfg(2, 3, 4, 5);
    const auto a = generate_channels(cfg, 99);
    const auto b = generate_channels(cfg, 99);
    CHECK(a.max_abs_difference(b) == 0.0);

    const auto c = generate_channels(cfg, 100);
    CHECK(a.max_abs_difference(c) > 0.0);
}

TEST_CASE("genericity proxy across configs and seeds") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 17ull})
        for (const auto& cfg : {NetworkConfig(2, 2, 3, 3), NetworkConfig(3, 2, 6, 8),
                                NetworkConfig(2, 1, 12, 12)}) {
            const auto ch = generate_channels(cfg, seed);
            for (int j = 0; j < cfg.G; ++j)
                for (int l = 0; l < cfg.K; ++l)
                    for (int i = 0; i < cfg.G; ++i) {
                        const auto sv = singular_values(ch.H(j, l, i));
                        CHECK(sv(sv.size() - 1) > 1e-6);
                    }
        }
}

TEST_CASE("spatial extension") {
    CHECK(spatially_extend(NetworkConfig(2, 3, 2, 3), 3) == NetworkConfig(2, 3, 6, 9));
    CHECK(spatially_extend(NetworkConfig(2, 2, 3, 4), 1) == NetworkConfig(2, 2, 3, 4));
    CHECK(spatially_extend(NetworkConfig(2, 3, 5, 9), 5) == NetworkConfig(2, 3, 25, 45));
    CHECK_THROWS(spatially_extend(NetworkConfig(2, 2, 3, 4), 0));

    // Composition: extending by a*b equals extending twice.
    for (int a : {2, 3})
        for (int b : {2, 5}) {
            const NetworkConfig cfg(3, 2, 4, 7);
            CHECK(spatially_extend(cfg, a * b) ==
                  spatially_extend(spatially_extend(cfg, a), b));
        }

    // gamma is unchanged by extension.
    CHECK(spatially_extend(NetworkConfig(2, 3, 2, 3), 7).gamma() ==
          NetworkConfig(2, 3, 2, 3).gamma());
}

TEST_CASE("stream demand") {
    CHECK_THROWS(DofDemand(0));
    CHECK(DofDemand(1).alignment_equations(NetworkConfig(3, 2, 3, 4)) == 2);
    CHECK(DofDemand(1).alignment_equations(NetworkConfig(3, 2, 3, 5)) == 1);
    CHECK(DofDemand(8).alignment_equations(NetworkConfig(4, 1, 11, 29)) == 3);
}

TEST_CASE("the pinned generator never changes") {
    // Frozen first draws of GaussianStream(42); any change here breaks
    // reproducibility of every seeded artifact in the repo.
    GaussianStream g(42);
    const auto a = g.cgauss();
    const auto b = g.cgauss();
    CHECK(a.real() == doctest::Approx(-0.76167742478070677).epsilon(1e-15));
    CHECK(a.imag() == doctest::Approx(-0.90938418668435983).epsilon(1e-15));
    CHECK(b.real() == doctest::Approx(0.7739424070180545).epsilon(1e-15));
    CHECK(b.imag() == doctest::Approx(0.89214648000641483).epsilon(1e-15));
    CHECK(mix_seed(0) == 16294208416658607535ULL);
    CHECK(mix_seed(1) == 10451216379200822465ULL);
}
