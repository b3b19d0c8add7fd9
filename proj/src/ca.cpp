#include "cashare/ca.hpp"

#include <algorithm>
#include <string>

#include "cashare/errors.hpp"

namespace cashare {

RuleNumber::RuleNumber(unsigned value) {
    if (value > max_value) {
        throw DomainError("rule number " + std::to_string(value) + " outside [0, 511]");
    }
    value_ = static_cast<std::uint16_t>(value);
}

NeighborhoodWeights rule_to_weights(RuleNumber rule) {
    NeighborhoodWeights weights;
    for (int a = -1; a <= 1; ++a) {
        for (int b = -1; b <= 1; ++b) {
            weights.at(a, b) = rule.bit(weight_bit_position(a, b)) ? 1 : 0;
        }
    }
    return weights;
}

RuleNumber weights_to_rule(const NeighborhoodWeights& weights) {
    unsigned value = 0;
    for (int a = -1; a <= 1; ++a) {
        for (int b = -1; b <= 1; ++b) {
            const auto lambda = weights.at(a, b);
            if (lambda > 1) {
                throw DomainError("neighbourhood weight at (" + std::to_string(a) + "," + std::to_string(b) +
                                  ") is " + std::to_string(lambda) + ", expected 0 or 1");
            }
            value |= static_cast<unsigned>(lambda) << weight_bit_position(a, b);
        }
    }
    return RuleNumber(value);
}

// ---------------------------------------------------------------------------
// CellMatrix

namespace {

void check_shape(std::size_t rows, std::size_t cols, unsigned depth) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("cell matrix must have at least one row and one column");
    }
    if (depth == 0 || depth > CellMatrix::max_depth) {
        throw DomainError("cell depth " + std::to_string(depth) + " outside [1, 24]");
    }
}

std::size_t wrap_index(std::ptrdiff_t i, std::size_t n) {
    const auto m = static_cast<std::ptrdiff_t>(n);
    auto r = i % m;
    return static_cast<std::size_t>(r < 0 ? r + m : r);
}

}  // namespace

CellMatrix::CellMatrix(std::size_t rows, std::size_t cols, unsigned depth)
    : rows_(rows), cols_(cols), depth_(depth) {
    check_shape(rows, cols, depth);
    cells_.assign(rows * cols, 0);
}

CellMatrix::CellMatrix(std::size_t rows, std::size_t cols, unsigned depth, std::vector<std::uint32_t> cells)
    : rows_(rows), cols_(cols), depth_(depth), cells_(std::move(cells)) {
    check_shape(rows, cols, depth);
    if (cells_.size() != rows * cols) {
        throw ShapeError("expected " + std::to_string(rows * cols) + " cells, got " + std::to_string(cells_.size()));
    }
    const auto limit = mask();
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        if (cells_[i] > limit) {
            throw DomainError("cell " + std::to_string(i) + " value " + std::to_string(cells_[i]) +
                              " not below 2^" + std::to_string(depth));
        }
    }
}

std::uint32_t CellMatrix::wrapped(std::ptrdiff_t row, std::ptrdiff_t col) const {
    return (*this)(wrap_index(row, rows_), wrap_index(col, cols_));
}

void CellMatrix::wipe() noexcept {
    volatile std::uint32_t* p = cells_.data();
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        p[i] = 0;
    }
}

CellMatrix add(const CellMatrix& a, const CellMatrix& b) {
    if (!a.same_shape(b)) {
        throw ShapeError("cannot add matrices of different shape or modulus");
    }
    std::vector<std::uint32_t> out(a.size());
    const auto mask = a.mask();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (a.cells()[i] + b.cells()[i]) & mask;
    }
    return CellMatrix(a.rows(), a.cols(), a.depth(), std::move(out));
}

// ---------------------------------------------------------------------------
// ConfigWindow

ConfigWindow::ConfigWindow(std::vector<CellMatrix> configs) : configs_(std::move(configs)) {
    if (configs_.size() < 2) {
        throw ShapeError("a memory window needs at least two configurations");
    }
    for (const auto& c : configs_) {
        if (!c.same_shape(configs_.front())) {
            throw ShapeError("window configurations differ in shape or modulus");
        }
    }
}

void ConfigWindow::advance(CellMatrix next) {
    if (!next.same_shape(configs_.front())) {
        throw ShapeError("configuration does not match the window shape");
    }
    configs_.front().wipe();
    std::rotate(configs_.begin(), configs_.begin() + 1, configs_.end());
    configs_.back() = std::move(next);
}

ConfigWindow ConfigWindow::reversed() const {
    return ConfigWindow(std::vector<CellMatrix>(configs_.rbegin(), configs_.rend()));
}

void ConfigWindow::wipe() noexcept {
    for (auto& c : configs_) {
        c.wipe();
    }
}

// ---------------------------------------------------------------------------
// Steps

namespace {

// acc[i][j] += sign * sum over set weights of src[(i+a) mod r][(j+b) mod s].
// Unsigned wrap-around is exact modulo 2^32, hence modulo every c = 2^b.
void accumulate_rule(const CellMatrix& src, RuleNumber rule, bool subtract, std::vector<std::uint32_t>& acc) {
    if (rule.value() == 0) {
        return;
    }
    const std::size_t r = src.rows();
    const std::size_t s = src.cols();
    const auto cells = src.cells();

    std::vector<std::size_t> col_of[3];
    for (int b = -1; b <= 1; ++b) {
        auto& idx = col_of[b + 1];
        idx.resize(s);
        for (std::size_t j = 0; j < s; ++j) {
            idx[j] = wrap_index(static_cast<std::ptrdiff_t>(j) + b, s);
        }
    }

    for (int a = -1; a <= 1; ++a) {
        for (int b = -1; b <= 1; ++b) {
            if (!rule.bit(weight_bit_position(a, b))) {
                continue;
            }
            const auto& cols = col_of[b + 1];
            for (std::size_t i = 0; i < r; ++i) {
                const std::uint32_t* src_row = cells.data() + wrap_index(static_cast<std::ptrdiff_t>(i) + a, r) * s;
                std::uint32_t* dst_row = acc.data() + i * s;
                if (subtract) {
                    for (std::size_t j = 0; j < s; ++j) dst_row[j] -= src_row[cols[j]];
                } else {
                    for (std::size_t j = 0; j < s; ++j) dst_row[j] += src_row[cols[j]];
                }
            }
        }
    }
}

CellMatrix reduce(const CellMatrix& like, std::vector<std::uint32_t> acc) {
    const auto mask = like.mask();
    for (auto& v : acc) v &= mask;
    return CellMatrix(like.rows(), like.cols(), like.depth(), std::move(acc));
}

void check_arity(const ConfigWindow& window, std::span<const RuleNumber> rules) {
    if (rules.size() + 1 != window.order()) {
        throw ArityError("a window of order " + std::to_string(window.order()) + " needs " +
                         std::to_string(window.order() - 1) + " rules, got " + std::to_string(rules.size()));
    }
}

}  // namespace

CellMatrix lca_step(const CellMatrix& config, RuleNumber rule) {
    std::vector<std::uint32_t> acc(config.size(), 0);
    accumulate_rule(config, rule, false, acc);
    return reduce(config, std::move(acc));
}

CellMatrix lmca_step(const ConfigWindow& window, std::span<const RuleNumber> rules) {
    check_arity(window, rules);
    const std::size_t k = window.order();
    std::vector<std::uint32_t> acc(window.oldest().cells().begin(), window.oldest().cells().end());
    // w_l acts on the member l places back from the end: w_1 on the newest.
    for (std::size_t l = 1; l < k; ++l) {
        accumulate_rule(window[k - l], rules[l - 1], false, acc);
    }
    return reduce(window.oldest(), std::move(acc));
}

CellMatrix lmca_inverse_step(const ConfigWindow& window, std::span<const RuleNumber> rules) {
    check_arity(window, rules);
    const std::size_t k = window.order();
    std::vector<std::uint32_t> acc(window.oldest().cells().begin(), window.oldest().cells().end());
    // Member j (1-based from the inverse-oldest) holds C^(t+1-j) and carries w_j.
    for (std::size_t j = 1; j < k; ++j) {
        accumulate_rule(window[j], rules[j - 1], true, acc);
    }
    return reduce(window.oldest(), std::move(acc));
}

namespace {

template <typename Step>
std::vector<CellMatrix> evolve(const ConfigWindow& init, std::span<const RuleNumber> rules, std::size_t steps,
                               Step step) {
    check_arity(init, rules);
    std::vector<CellMatrix> sequence(init.configs().begin(), init.configs().end());
    sequence.reserve(init.order() + steps);
    ConfigWindow window = init;
    for (std::size_t t = 0; t < steps; ++t) {
        auto next = step(window, rules);
        sequence.push_back(next);
        window.advance(std::move(next));
    }
    return sequence;
}

}  // namespace

std::vector<CellMatrix> lmca_evolve(const ConfigWindow& init, std::span<const RuleNumber> rules, std::size_t steps) {
    return evolve(init, rules, steps, lmca_step);
}

std::vector<CellMatrix> lmca_inverse_evolve(const ConfigWindow& init, std::span<const RuleNumber> rules,
                                            std::size_t steps) {
    return evolve(init, rules, steps, lmca_inverse_step);
}

}  // namespace cashare
