#pragma once

// Reference implementations used only by the tests. They follow the defining
// sums literally (nested vectors, % arithmetic, explicit neighbour loops) and
// share no code with the library's stepping routines.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "cashare/ca.hpp"

namespace oracle {

using Grid = std::vector<std::vector<std::uint64_t>>;

inline Grid to_grid(const cashare::CellMatrix& m) {
    Grid g(m.rows(), std::vector<std::uint64_t>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = m(i, j);
    return g;
}

inline cashare::CellMatrix to_matrix(const Grid& g, unsigned depth) {
    std::vector<std::uint32_t> cells;
    for (const auto& row : g)
        for (auto v : row) cells.push_back(static_cast<std::uint32_t>(v));
    return cashare::CellMatrix(g.size(), g[0].size(), depth, std::move(cells));
}

inline bool weight(unsigned rule, int a, int b) { return (rule >> (8 - (3 * (a + 1) + (b + 1)))) & 1U; }

// a'_{ij} = sum_{a,b} lambda_{a,b} a_{i+a, j+b} (mod c), periodic boundaries.
inline Grid lca(const Grid& g, unsigned rule, std::uint64_t c) {
    const long r = static_cast<long>(g.size()), s = static_cast<long>(g[0].size());
    Grid out(g.size(), std::vector<std::uint64_t>(g[0].size(), 0));
    for (long i = 0; i < r; ++i) {
        for (long j = 0; j < s; ++j) {
            std::uint64_t sum = 0;
            for (int a = -1; a <= 1; ++a)
                for (int b = -1; b <= 1; ++b)
                    if (weight(rule, a, b)) sum += g[((i + a) % r + r) % r][((j + b) % s + s) % s];
            out[i][j] = sum % c;
        }
    }
    return out;
}

inline Grid add(const Grid& x, const Grid& y, std::uint64_t c) {
    Grid out = x;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x[0].size(); ++j) out[i][j] = (x[i][j] + y[i][j]) % c;
    return out;
}

inline Grid negate(const Grid& x, std::uint64_t c) {
    Grid out = x;
    for (auto& row : out)
        for (auto& v : row) v = (c - v) % c;
    return out;
}

// General k-th order linear memory step with arbitrary f_1..f_k:
// C^(t+1) = sum_{m=0}^{k-1} f_{m+1}(C^(t-m)). history is oldest -> newest.
inline Grid lmca_general(const std::vector<Grid>& history, const std::vector<unsigned>& f, std::uint64_t c) {
    const std::size_t k = f.size();
    Grid acc(history[0].size(), std::vector<std::uint64_t>(history[0][0].size(), 0));
    for (std::size_t m = 0; m < k; ++m) {
        acc = add(acc, lca(history[history.size() - 1 - m], f[m], c), c);
    }
    return acc;
}

// Forward scheme step: f_k is the identity (rule 16).
inline Grid forward(const std::vector<Grid>& history, std::vector<unsigned> rules, std::uint64_t c) {
    rules.push_back(16);
    return lmca_general(history, rules, c);
}

// Inverse step: -sum_{m=0}^{k-2} f_{k-m-1}(V~^(t-m)) + a~^(t-k+1); inverse history oldest -> newest.
inline Grid inverse(const std::vector<Grid>& history, const std::vector<unsigned>& rules, std::uint64_t c) {
    const std::size_t k = rules.size() + 1;
    Grid acc = history[history.size() - k];
    for (std::size_t m = 0; m + 2 <= k; ++m) {
        const unsigned rule = rules[k - m - 2];  // f_{k-m-1}, 1-based
        acc = add(acc, negate(lca(history[history.size() - 1 - m], rule, c), c), c);
    }
    return acc;
}

// 1x1 torus: every offset is the cell itself, so f_w(x) = popcount(w) * x.
inline std::vector<std::uint64_t> scalar_forward(std::vector<std::uint64_t> init, const std::vector<unsigned>& rules,
                                                 std::size_t steps, std::uint64_t c) {
    const std::size_t k = init.size();
    for (std::size_t t = 0; t < steps; ++t) {
        const std::size_t n = init.size();
        std::uint64_t v = init[n - k];
        for (std::size_t l = 1; l < k; ++l) v += static_cast<std::uint64_t>(std::popcount(rules[l - 1])) * init[n - l];
        init.push_back(v % c);
    }
    return init;
}

struct SubsetResult {
    std::size_t min_support = 0;
    std::size_t max_support = 0;
    bool uniform = false;
    bool determined = false;
};

// Brute-force census: every (secret, complement) pair evolved with the oracle
// step; for each j-subset of the n shares, secrets grouped by observed value.
inline std::map<std::vector<unsigned>, SubsetResult> census(std::size_t r, std::size_t s, std::uint64_t c,
                                                            unsigned k, unsigned m, unsigned n,
                                                            const std::vector<unsigned>& rules, unsigned j) {
    std::vector<Grid> all;
    const std::size_t cells = r * s;
    std::uint64_t count = 1;
    for (std::size_t q = 0; q < cells; ++q) count *= c;
    for (std::uint64_t code = 0; code < count; ++code) {
        Grid g(r, std::vector<std::uint64_t>(s));
        auto x = code;
        for (std::size_t q = 0; q < cells; ++q) {
            g[q / s][q % s] = x % c;
            x /= c;
        }
        all.push_back(g);
    }

    std::map<std::vector<unsigned>, std::map<std::vector<Grid>, std::map<std::size_t, std::size_t>>> tally;
    std::vector<std::size_t> choice(k, 0);
    for (;;) {
        std::vector<Grid> seq;
        for (auto idx : choice) seq.push_back(all[idx]);
        while (seq.size() < m + n) seq.push_back(forward(seq, rules, c));
        std::vector<Grid> shares(seq.begin() + m, seq.end());

        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + j, true);
        do {
            std::vector<unsigned> subset;
            std::vector<Grid> observed;
            for (unsigned q = 0; q < n; ++q)
                if (pick[q]) {
                    subset.push_back(q);
                    observed.push_back(shares[q]);
                }
            ++tally[subset][observed][choice[0]];
        } while (std::prev_permutation(pick.begin(), pick.end()));

        std::size_t pos = 0;
        while (pos < k && ++choice[pos] == all.size()) choice[pos++] = 0;
        if (pos == k) break;
    }

    std::map<std::vector<unsigned>, SubsetResult> out;
    for (const auto& [subset, by_obs] : tally) {
        SubsetResult res{all.size(), 0, true, true};
        for (const auto& [obs, secrets] : by_obs) {
            std::set<std::size_t> counts;
            for (const auto& [_, n_] : secrets) counts.insert(n_);
            res.min_support = std::min(res.min_support, secrets.size());
            res.max_support = std::max(res.max_support, secrets.size());
            res.uniform = res.uniform && secrets.size() == all.size() && counts.size() == 1;
            res.determined = res.determined && secrets.size() == 1;
        }
        out[subset] = res;
    }
    return out;
}

inline cashare::CellMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, unsigned depth) {
    std::vector<std::uint32_t> cells(rows * cols);
    const std::uint64_t c = std::uint64_t{1} << depth;
    for (auto& v : cells) v = static_cast<std::uint32_t>(rng() % c);
    return cashare::CellMatrix(rows, cols, depth, std::move(cells));
}

inline std::vector<cashare::RuleNumber> random_rules(std::mt19937_64& rng, std::size_t count) {
    std::vector<cashare::RuleNumber> rules;
    for (std::size_t l = 0; l < count; ++l) rules.emplace_back(static_cast<unsigned>(rng() % 512));
    return rules;
}

inline std::vector<unsigned> values(const std::vector<cashare::RuleNumber>& rules) {
    std::vector<unsigned> out;
    for (auto r : rules) out.push_back(r.value());
    return out;
}

inline std::filesystem::path data_dir() { return CASHARE_TEST_DATA_DIR; }

}  // namespace oracle
