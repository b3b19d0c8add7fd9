#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

#include <boost/multiprecision/cpp_int.hpp>

#include "cashare/ca.hpp"

namespace cashare {

using BigInt = boost::multiprecision::cpp_int;

// Source of uniformly random bytes.
class EntropySource {
public:
    virtual ~EntropySource() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;

    std::uint32_t next_u32();
};

// The host's secure random source (getrandom / /dev/urandom via std::random_device).
class SystemEntropy final : public EntropySource {
public:
    void fill(std::span<std::uint8_t> out) override;

private:
    std::random_device device_;
};

// Blum-Blum-Shub generator: x <- x^2 mod n, emitting lsb(x) after each squaring.
//
// Construction squares the seed once (x = x0^2 mod n) so the working residue
// is a quadratic residue; no bit is emitted for x0 or for that first square.
// Not safe for concurrent use.
class BbsGenerator final : public EntropySource {
public:
    // Throws ParamError unless p != q are primes congruent to 3 mod 4, and
    // SeedError unless 1 < x0 < p*q with gcd(x0, p*q) = 1.
    BbsGenerator(const BigInt& p, const BigInt& q, const BigInt& x0);

    // Fresh primes of prime_bits bits each and a fresh coprime seed, all from entropy.
    static BbsGenerator generate(EntropySource& entropy, unsigned prime_bits = 256);

    unsigned next_bit();
    // `count` bits (<= 32) assembled most-significant first.
    std::uint32_t next_bits(unsigned count);

    // Bytes are assembled from 8 bits each, MSB first.
    void fill(std::span<std::uint8_t> out) override;

    const BigInt& modulus() const noexcept { return modulus_; }
    const BigInt& residue() const noexcept { return residue_; }
    // Squarings performed since construction (excluding the seed squaring).
    std::uint64_t squarings() const noexcept { return squarings_; }

private:
    BigInt modulus_;
    BigInt residue_;
    std::uint64_t squarings_ = 0;
};

// Probable prime of exactly `bits` bits, congruent to 3 mod 4.
BigInt random_blum_prime(EntropySource& entropy, unsigned bits);

bool is_probable_prime(const BigInt& n);

// r x s matrix of depth b, row-major, each cell taking the next b bits MSB first.
// Consumes exactly r*s*b generator bits.
CellMatrix bbs_fill_matrix(BbsGenerator& generator, std::size_t rows, std::size_t cols, unsigned depth);

}  // namespace cashare
