#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cclab/alphabet.hpp"
#include "cclab/rng.hpp"

using namespace cclab;

namespace {

SeqM random_seq(Alphabet a, std::size_t n, Rng& rng) {
    SeqM x(a, n);
    for (std::size_t k = 0; k < n; ++k) x.data()[k] = Symbol(rng.next_below(a.M));
    return x;
}

std::uint64_t pack(const SeqM& x) {
    std::uint64_t idx = 0;
    for (std::size_t k = 0; k < x.size(); ++k) idx = idx * x.alphabet().M + x[k];
    return idx;
}

}  // namespace

TEST_CASE("alphabet validation") {
    CHECK_THROWS_AS(Alphabet(1), InvalidArgument);
    CHECK_THROWS_AS(Alphabet(0), InvalidArgument);
    CHECK_NOTHROW(Alphabet(2));
    CHECK_NOTHROW(Alphabet(256));
    CHECK_THROWS_AS(Alphabet(257), InvalidArgument);
    CHECK_THROWS_AS(SeqM::of(Alphabet(2), {0, 2}), InvalidArgument);
}

TEST_CASE("add_mod / sub_mod examples") {
    const Alphabet b2(2), b5(5);
    CHECK(add_mod(SeqM::of(b2, {1, 0, 1}), SeqM::of(b2, {1, 1, 0})) == SeqM::of(b2, {0, 1, 1}));
    CHECK(add_mod(SeqM::of(b5, {4, 3}), SeqM::of(b5, {2, 2})) == SeqM::of(b5, {1, 0}));
    CHECK(sub_mod(SeqM::of(b5, {1, 0}), SeqM::of(b5, {2, 2})) == SeqM::of(b5, {4, 3}));

    Rng rng(7);
    const SeqM a = random_seq(b5, 20, rng);
    const SeqM zero(b5, 20);
    CHECK(add_mod(a, zero) == a);
    CHECK(sub_mod(a, a) == zero);
    // characteristic 2: subtraction coincides with addition
    const SeqM x = random_seq(b2, 16, rng), y = random_seq(b2, 16, rng);
    CHECK(sub_mod(x, y) == add_mod(x, y));
}

TEST_CASE("add/sub round trip property") {
    Rng rng(11);
    for (std::uint32_t M : {2u, 3u, 5u, 17u}) {
        const Alphabet a(M);
        for (int rep = 0; rep < 50; ++rep) {
            const SeqM x = random_seq(a, 12, rng), y = random_seq(a, 12, rng);
            CHECK(sub_mod(add_mod(x, y), y) == x);
        }
    }
}

TEST_CASE("mismatch errors") {
    const Alphabet b2(2), b3(3);
    CHECK_THROWS_AS(add_mod(SeqM(b2, 3), SeqM(b2, 4)), InvalidArgument);
    CHECK_THROWS_AS(add_mod(SeqM(b2, 3), SeqM(b3, 3)), InvalidArgument);
    CHECK_THROWS_AS(sub_mod(SeqM(b2, 3), SeqM(b3, 3)), InvalidArgument);
}

TEST_CASE("isi_map examples") {
    const Alphabet b2(2), b3(3);
    // depth 0 is the identity
    Rng rng(3);
    const SeqM x = random_seq(b3, 10, rng);
    CHECK(isi_map(x, IsiMap{0}) == x);
    CHECK(isi_map(SeqM::of(b2, {1, 0, 1}), IsiMap{1}) == SeqM::of(b2, {1, 1, 1}));
    CHECK(isi_map(SeqM::of(b3, {1, 1, 1}), IsiMap{2}) == SeqM::of(b3, {1, 2, 0}));
}

TEST_CASE("isi_invert examples and round trip") {
    const Alphabet b2(2);
    CHECK(isi_invert(SeqM::of(b2, {1, 1, 1}), IsiMap{1}) == SeqM::of(b2, {1, 0, 1}));
    Rng rng(23);
    for (std::uint32_t M : {2u, 3u, 4u}) {
        for (std::uint32_t l : {0u, 1u, 2u, 3u}) {
            for (int rep = 0; rep < 20; ++rep) {
                const SeqM x = random_seq(Alphabet(M), 10, rng);
                const IsiMap g{l};
                CHECK(isi_invert(isi_map(x, g), g) == x);
            }
        }
    }
}

TEST_CASE("isi_map is a bijection (enumeration)") {
    for (std::uint32_t M = 2; M <= 3; ++M) {
        for (int n = 1; n <= 6; ++n) {
            std::uint64_t space = 1;
            for (int k = 0; k < n; ++k) space *= M;
            for (std::uint32_t l = 0; l <= 2; ++l) {
                std::vector<bool> seen(space, false);
                SeqM x(Alphabet(M), static_cast<std::size_t>(n));
                for (std::uint64_t idx = 0;; ++idx) {
                    const SeqM z = isi_map(x, IsiMap{l});
                    const std::uint64_t zi = pack(z);
                    REQUIRE(!seen[zi]);
                    seen[zi] = true;
                    if (idx + 1 == space) break;
                    for (int k = n - 1; k >= 0; --k) {
                        if (x[std::size_t(k)] + 1u < M) {
                            x.data()[k] = Symbol(x[std::size_t(k)] + 1);
                            break;
                        }
                        x.data()[k] = 0;
                    }
                }
            }
        }
    }
}

TEST_CASE("uniform input stays uniform through the channel map") {
    // enumerating all inputs, every output occurs exactly once: the exact
    // uniform law pushes forward to the exact uniform law
    const std::uint32_t M = 2;
    const int n = 12;
    std::uint64_t space = 1;
    for (int k = 0; k < n; ++k) space *= M;
    for (std::uint32_t l : {1u, 3u}) {
        std::vector<std::uint32_t> hits(space, 0);
        SeqM x(Alphabet(M), static_cast<std::size_t>(n));
        for (std::uint64_t idx = 0;; ++idx) {
            ++hits[pack(isi_map(x, IsiMap{l}))];
            if (idx + 1 == space) break;
            for (int k = n - 1; k >= 0; --k) {
                if (x[std::size_t(k)] + 1u < M) {
                    x.data()[k] = Symbol(x[std::size_t(k)] + 1);
                    break;
                }
                x.data()[k] = 0;
            }
        }
        for (std::uint64_t i = 0; i < space; ++i) REQUIRE(hits[i] == 1);
    }
}
