#pragma once

// (k, n) threshold sharing of a configuration through a reversible k-th order
// linear memory automaton.
//
// The secret is C^(0); C^(1)..C^(k-1) are random. The automaton runs forward to
// C^(m+n-1) and the last n configurations C^(m)..C^(m+n-1) are the shares.
// Any k shares with consecutive indices are a full window of the automaton, so
// running the inverse automaton back from them reaches C^(0) exactly.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cashare/bbs.hpp"
#include "cashare/ca.hpp"
#include "cashare/share_format.hpp"

namespace cashare {

struct SchemeParams {
    unsigned order = 2;        // k
    unsigned share_count = 2;  // n
    unsigned offset = 2;       // m
    unsigned depth = 8;        // b
    std::size_t rows = 1;
    std::size_t cols = 1;
    std::vector<RuleNumber> rules;  // w_1 .. w_{k-1}
    SchemeId scheme_id{};
};

// Throws ParamError describing the first violated constraint.
void validate(const SchemeParams& params);

// Random rules (uniform over [0, 511]) and a fresh scheme id from `entropy`.
// An absent offset defaults to k.
SchemeParams setup(unsigned order, unsigned share_count, std::optional<unsigned> offset, unsigned depth,
                   std::size_t rows, std::size_t cols, EntropySource& entropy);

// As above with caller-chosen rules; only the scheme id is drawn from `entropy`.
SchemeParams setup_with_rules(unsigned order, unsigned share_count, std::optional<unsigned> offset, unsigned depth,
                              std::size_t rows, std::size_t cols, std::vector<RuleNumber> rules,
                              EntropySource& entropy);

ShareHeader share_header(const SchemeParams& params, unsigned index);

// Forward evolution from a full initial window, returning C^(m)..C^(m+n-1).
// Dropped configurations are wiped. *forward_steps receives the number of
// computed configurations (m + n - k).
std::vector<CellMatrix> share_configurations(ConfigWindow init, std::span<const RuleNumber> rules, unsigned offset,
                                             unsigned share_count, std::size_t* forward_steps = nullptr);

struct SplitTrace {
    std::size_t forward_steps = 0;
};

// Splits with caller-supplied random configurations C^(1)..C^(k-1).
std::vector<Share> split_with_complement(const CellMatrix& secret, std::vector<CellMatrix> complement,
                                         const SchemeParams& params, SplitTrace* trace = nullptr);

// Splits with C^(1)..C^(k-1) drawn from the generator (rows*cols*b bits each).
std::vector<Share> split(const CellMatrix& secret, const SchemeParams& params, BbsGenerator& generator,
                         SplitTrace* trace = nullptr);

struct RecoveryTrace {
    std::size_t alpha = 0;
    std::size_t inverse_steps = 0;
    std::vector<unsigned> used_indices;
};

// Recovers C^(0) from any set containing k consecutive shares.
// Throws MixedSchemeError or InsufficientSharesError.
CellMatrix recover(std::span<const Share> shares, RecoveryTrace* trace = nullptr);

}  // namespace cashare
