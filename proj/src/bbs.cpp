#include "cashare/bbs.hpp"

#include <vector>

#include <boost/multiprecision/miller_rabin.hpp>
#include <boost/random/mersenne_twister.hpp>

#include "cashare/errors.hpp"

namespace cashare {

std::uint32_t EntropySource::next_u32() {
    std::uint8_t bytes[4];
    fill(bytes);
    return (std::uint32_t{bytes[0]} << 24) | (std::uint32_t{bytes[1]} << 16) | (std::uint32_t{bytes[2]} << 8) |
           std::uint32_t{bytes[3]};
}

void SystemEntropy::fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
        auto word = device_();
        for (int b = 0; b < 4 && i < out.size(); ++b, ++i) {
            out[i] = static_cast<std::uint8_t>(word >> (8 * b));
        }
    }
}

bool is_probable_prime(const BigInt& n) {
    if (n < 2) return false;
    // Miller-Rabin witnesses; deterministic across runs.
    static thread_local boost::random::mt19937 witness_engine(0x5eed);
    return boost::multiprecision::miller_rabin_test(n, 40, witness_engine);
}

BigInt random_blum_prime(EntropySource& entropy, unsigned bits) {
    if (bits < 3) {
        throw ParamError("prime size must be at least 3 bits");
    }
    std::vector<std::uint8_t> bytes((bits + 7) / 8);
    for (;;) {
        entropy.fill(bytes);
        BigInt candidate;
        for (auto b : bytes) {
            candidate = (candidate << 8) | b;
        }
        candidate &= (BigInt(1) << bits) - 1;
        bit_set(candidate, bits - 1);
        candidate |= 3;
        const BigInt limit = BigInt(1) << bits;
        for (; candidate < limit; candidate += 4) {
            if (is_probable_prime(candidate)) {
                return candidate;
            }
        }
    }
}

BbsGenerator::BbsGenerator(const BigInt& p, const BigInt& q, const BigInt& x0) {
    if (p == q) {
        throw ParamError("BBS primes must be distinct");
    }
    for (const BigInt* f : {&p, &q}) {
        if (*f % 4 != 3) {
            throw ParamError("BBS prime " + f->str() + " is not congruent to 3 mod 4");
        }
        if (!is_probable_prime(*f)) {
            throw ParamError("BBS factor " + f->str() + " is not prime");
        }
    }
    modulus_ = p * q;
    if (x0 <= 1 || x0 >= modulus_) {
        throw SeedError("BBS seed must satisfy 1 < x0 < n = " + modulus_.str());
    }
    if (boost::multiprecision::gcd(x0, modulus_) != 1) {
        throw SeedError("BBS seed shares a factor with the modulus");
    }
    residue_ = (x0 * x0) % modulus_;
}

BbsGenerator BbsGenerator::generate(EntropySource& entropy, unsigned prime_bits) {
    const BigInt p = random_blum_prime(entropy, prime_bits);
    BigInt q;
    do {
        q = random_blum_prime(entropy, prime_bits);
    } while (q == p);
    const BigInt n = p * q;

    std::vector<std::uint8_t> bytes((2 * prime_bits + 7) / 8 + 8);
    for (;;) {
        entropy.fill(bytes);
        BigInt x0;
        for (auto b : bytes) {
            x0 = (x0 << 8) | b;
        }
        x0 %= n;
        if (x0 > 1 && boost::multiprecision::gcd(x0, n) == 1) {
            return BbsGenerator(p, q, x0);
        }
    }
}

unsigned BbsGenerator::next_bit() {
    residue_ = (residue_ * residue_) % modulus_;
    ++squarings_;
    return bit_test(residue_, 0) ? 1U : 0U;
}

std::uint32_t BbsGenerator::next_bits(unsigned count) {
    std::uint32_t value = 0;
    for (unsigned i = 0; i < count; ++i) {
        value = (value << 1) | next_bit();
    }
    return value;
}

void BbsGenerator::fill(std::span<std::uint8_t> out) {
    for (auto& byte : out) {
        byte = static_cast<std::uint8_t>(next_bits(8));
    }
}

CellMatrix bbs_fill_matrix(BbsGenerator& generator, std::size_t rows, std::size_t cols, unsigned depth) {
    CellMatrix m(rows, cols, depth);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m.set(i, j, generator.next_bits(depth));
        }
    }
    return m;
}

}  // namespace cashare
