#include <doctest.h>

#include <cstdint>
#include <vector>

#include "cashare/bbs.hpp"
#include "cashare/errors.hpp"

using namespace cashare;

namespace {

// Plain 64-bit BBS for small moduli.
std::vector<unsigned> reference_bits(std::uint64_t n, std::uint64_t x0, std::size_t count) {
    std::uint64_t x = x0 * x0 % n;
    std::vector<unsigned> out;
    for (std::size_t q = 0; q < count; ++q) {
        x = x * x % n;
        out.push_back(static_cast<unsigned>(x & 1));
    }
    return out;
}

// Deterministic byte stream for generate().
class CountingEntropy final : public EntropySource {
public:
    explicit CountingEntropy(std::uint8_t start) : next_(start) {}
    void fill(std::span<std::uint8_t> out) override {
        for (auto& b : out) {
            next_ = static_cast<std::uint8_t>(next_ * 167 + 13);
            b = next_;
        }
    }

private:
    std::uint8_t next_;
};

}  // namespace

TEST_CASE("small Blum integer vector") {
    BbsGenerator gen(7, 19, 100);
    CHECK(gen.modulus() == 133);
    CHECK(gen.residue() == 25);
    std::vector<unsigned> residues, bits;
    for (int q = 0; q < 4; ++q) {
        bits.push_back(gen.next_bit());
        residues.push_back(gen.residue().convert_to<unsigned>());
    }
    CHECK(residues == std::vector<unsigned>{93, 4, 16, 123});
    CHECK(bits == std::vector<unsigned>{1, 0, 0, 1});
    CHECK(gen.squarings() == 4);
}

TEST_CASE("bad seeds and parameters") {
    CHECK_THROWS_AS(BbsGenerator(7, 19, 133 * 3), SeedError);
    CHECK_THROWS_AS(BbsGenerator(7, 19, 133), SeedError);
    CHECK_THROWS_AS(BbsGenerator(7, 19, 1), SeedError);
    CHECK_THROWS_AS(BbsGenerator(7, 19, 14), SeedError);
    CHECK_THROWS_AS(BbsGenerator(5, 19, 2), ParamError);
    CHECK_THROWS_AS(BbsGenerator(7, 7, 2), ParamError);
    CHECK_THROWS_AS(BbsGenerator(15, 19, 2), ParamError);
}

TEST_CASE("bit stream matches the reference squaring") {
    for (std::uint64_t x0 : {2ULL, 100ULL, 5000ULL, 123456ULL}) {
        BbsGenerator gen(499, 503, x0);
        const auto expected = reference_bits(499 * 503, x0, 500);
        for (std::size_t q = 0; q < expected.size(); ++q) REQUIRE(gen.next_bit() == expected[q]);
    }
}

TEST_CASE("determinism") {
    BbsGenerator a(499, 503, 4242), b(499, 503, 4242);
    std::vector<std::uint8_t> x(64), y(64);
    a.fill(x);
    b.fill(y);
    CHECK(x == y);
}

TEST_CASE("cells are filled row-major, most significant bit first") {
    BbsGenerator gen(7, 19, 100);
    const auto m = bbs_fill_matrix(gen, 2, 2, 1);
    CHECK(m == CellMatrix(2, 2, 1, {1, 0, 0, 1}));
    CHECK(gen.squarings() == 4);

    BbsGenerator bits(499, 503, 77), cells(499, 503, 77);
    const auto expected = bits.next_bits(8);
    CHECK(bbs_fill_matrix(cells, 1, 1, 8)(0, 0) == expected);

    BbsGenerator manual(499, 503, 77);
    std::uint32_t v = 0;
    for (int q = 0; q < 8; ++q) v = (v << 1) | manual.next_bit();
    CHECK(v == expected);
}

TEST_CASE("fill consumes r*s*b squarings") {
    BbsGenerator gen(499, 503, 31337);
    bbs_fill_matrix(gen, 3, 5, 24);
    CHECK(gen.squarings() == 3 * 5 * 24);
    bbs_fill_matrix(gen, 4, 4, 1);
    CHECK(gen.squarings() == 3 * 5 * 24 + 16);
}

TEST_CASE("generated primes are Blum primes of the requested size") {
    CountingEntropy entropy(9);
    auto gen = BbsGenerator::generate(entropy, 48);
    CHECK(msb(gen.modulus()) >= 94);
    for (unsigned bits : {16U, 32U, 64U}) {
        const auto p = random_blum_prime(entropy, bits);
        CHECK(msb(p) == bits - 1);
        CHECK(p % 4 == 3);
        CHECK(is_probable_prime(p));
    }
}

TEST_CASE("primality test") {
    CHECK(is_probable_prime(2));
    CHECK(is_probable_prime(7919));
    CHECK_FALSE(is_probable_prime(1));
    CHECK_FALSE(is_probable_prime(7917));
    CHECK(is_probable_prime((BigInt(1) << 127) - 1));
    CHECK_FALSE(is_probable_prime((BigInt(1) << 128) + 1));
}
