#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cashare/ca.hpp"
#include "cashare/share_format.hpp"

namespace cashare {

// ---------------------------------------------------------------------------
// Exhaustive perfectness census

struct CensusParams {
    std::size_t rows = 1;
    std::size_t cols = 1;
    std::uint64_t modulus = 2;  // c, a power of two
    unsigned order = 2;         // k
    unsigned offset = 2;        // m
    unsigned share_count = 2;   // n
    std::vector<RuleNumber> rules;
    unsigned observed = 1;  // j, the size of each share subset examined
    // Keep every conditional distribution in the report (memory grows with the case count).
    bool record_distributions = true;
};

// Upper bound on c^(r*s*k) enumerated cases.
inline constexpr std::uint64_t census_case_cap = std::uint64_t{1} << 20;

enum class CensusVerdict {
    Perfect,     // every conditional secret distribution is uniform
    Determined,  // every observation is consistent with exactly one secret
    Leaky,       // neither
};

std::string to_string(CensusVerdict v);

// Secrets consistent with one observed value of a share subset, with multiplicity.
struct ConditionalDistribution {
    std::vector<std::uint32_t> observed;                 // the subset's cells, share after share
    std::map<std::uint64_t, std::uint64_t> secret_counts;  // secret (base-c digits, row-major) -> count
};

struct SubsetTally {
    std::vector<unsigned> participants;  // positions 0..n-1 of the observed shares
    bool consecutive = false;
    std::size_t observations = 0;  // distinct observed values
    std::size_t min_support = 0;   // fewest distinct secrets behind one observation
    std::size_t max_support = 0;
    bool uniform = false;
    bool determined = false;
    CensusVerdict verdict = CensusVerdict::Leaky;
    std::vector<ConditionalDistribution> distributions;
};

struct CensusReport {
    CensusParams params;
    std::uint64_t secret_count = 0;  // c^(r*s)
    std::uint64_t total_cases = 0;   // c^(r*s*k)
    std::vector<SubsetTally> subsets;
    CensusVerdict verdict = CensusVerdict::Leaky;

    // True when every consecutive subset among `subsets` pins the secret.
    bool consecutive_determined() const;
};

// Enumerates every secret and every random complement C^(1)..C^(k-1), derives
// all n shares and tallies, for every j-subset of shares, the secrets behind
// each observed value. Throws TooLargeError above census_case_cap cases,
// ParamError for invalid parameters.
CensusReport perfectness_census(const CensusParams& params);

// ---------------------------------------------------------------------------
// Share statistics

struct ChannelStats {
    std::vector<std::uint64_t> histogram;
    double chi_square = 0.0;
    std::size_t degrees_of_freedom = 0;
    double p_value = 0.0;  // upper tail of chi-square against the uniform law
    double horizontal_correlation = 0.0;
    double vertical_correlation = 0.0;
};

struct UniformityStats {
    // One channel for depths up to 8 bits; three (R, G, B) at 24 bits.
    std::vector<ChannelStats> channels;

    bool uniform_at(double significance) const;
};

// Histogram, chi-square against uniform over Z_c (per 8-bit channel at depth 24)
// and Pearson correlation of horizontally / vertically adjacent cells
// (without wrap-around). A channel with zero variance reports correlation 1.
UniformityStats uniformity_stats(const CellMatrix& matrix);

// Secret cell-bits divided by the share's payload cell-bits.
double information_rate(const Share& share, std::size_t secret_rows, std::size_t secret_cols, unsigned depth);

}  // namespace cashare
