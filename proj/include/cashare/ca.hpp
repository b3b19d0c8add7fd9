#pragma once

// Two-dimensional linear cellular automata on an r x s torus over Z_c, c = 2^b,
// and the reversible linear memory automata built from them.
//
// A linear rule is a 9-bit rule number. Bit 8 - (3(a+1) + (b+1)) of the rule
// is the weight of neighbour offset (a, b), so the top-left neighbour has
// weight 2^8, the centre 2^4 and the bottom-right 2^0.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cashare {

class RuleNumber {
public:
    static constexpr unsigned max_value = 511;

    constexpr RuleNumber() = default;
    // Throws DomainError when value > 511.
    explicit RuleNumber(unsigned value);

    constexpr unsigned value() const noexcept { return value_; }
    constexpr bool bit(int position) const noexcept { return (value_ >> position) & 1U; }

    friend constexpr bool operator==(RuleNumber, RuleNumber) = default;

private:
    std::uint16_t value_ = 0;
};

// Bit position of neighbour offset (row_offset, col_offset) in a rule number.
constexpr int weight_bit_position(int row_offset, int col_offset) noexcept {
    return 8 - (3 * (row_offset + 1) + (col_offset + 1));
}

struct NeighborhoodWeights {
    // lambda[row_offset + 1][col_offset + 1]
    std::array<std::array<std::uint8_t, 3>, 3> lambda{};

    std::uint8_t at(int row_offset, int col_offset) const {
        return lambda[static_cast<std::size_t>(row_offset + 1)][static_cast<std::size_t>(col_offset + 1)];
    }
    std::uint8_t& at(int row_offset, int col_offset) {
        return lambda[static_cast<std::size_t>(row_offset + 1)][static_cast<std::size_t>(col_offset + 1)];
    }

    friend bool operator==(const NeighborhoodWeights&, const NeighborhoodWeights&) = default;
};

NeighborhoodWeights rule_to_weights(RuleNumber rule);
// Throws DomainError if any entry is not 0 or 1.
RuleNumber weights_to_rule(const NeighborhoodWeights& weights);

// One configuration of the automaton: an r x s matrix over Z_{2^depth}.
class CellMatrix {
public:
    static constexpr unsigned max_depth = 24;

    CellMatrix() = default;
    // Zero matrix. Throws ShapeError for empty shapes, DomainError for a bad depth.
    CellMatrix(std::size_t rows, std::size_t cols, unsigned depth);
    // Row-major cells; every cell must be < 2^depth.
    CellMatrix(std::size_t rows, std::size_t cols, unsigned depth, std::vector<std::uint32_t> cells);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return cells_.size(); }
    unsigned depth() const noexcept { return depth_; }
    std::uint64_t modulus() const noexcept { return std::uint64_t{1} << depth_; }
    std::uint32_t mask() const noexcept { return static_cast<std::uint32_t>(modulus() - 1); }

    std::uint32_t operator()(std::size_t row, std::size_t col) const { return cells_[row * cols_ + col]; }
    // Periodic indexing: (row mod r, col mod s), negative offsets allowed.
    std::uint32_t wrapped(std::ptrdiff_t row, std::ptrdiff_t col) const;
    // Stores value & mask().
    void set(std::size_t row, std::size_t col, std::uint32_t value) { cells_[row * cols_ + col] = value & mask(); }

    std::span<const std::uint32_t> cells() const noexcept { return cells_; }

    bool same_shape(const CellMatrix& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_ && depth_ == other.depth_;
    }

    // Overwrites the cell storage with zeros through a volatile pointer.
    // Best effort only: copies made elsewhere are not reached.
    void wipe() noexcept;

    friend bool operator==(const CellMatrix&, const CellMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    unsigned depth_ = 0;
    std::vector<std::uint32_t> cells_;
};

// Element-wise (a + b) mod c.
CellMatrix add(const CellMatrix& a, const CellMatrix& b);

// k >= 2 configurations of equal shape, ordered oldest to newest.
class ConfigWindow {
public:
    // Throws ShapeError when fewer than two members or shapes differ.
    explicit ConfigWindow(std::vector<CellMatrix> configs);

    std::size_t order() const noexcept { return configs_.size(); }
    const CellMatrix& operator[](std::size_t i) const { return configs_[i]; }
    const CellMatrix& oldest() const { return configs_.front(); }
    const CellMatrix& newest() const { return configs_.back(); }
    std::span<const CellMatrix> configs() const noexcept { return configs_; }

    // Drops the oldest member and appends next (which must match in shape).
    void advance(CellMatrix next);
    // The same members in reverse order.
    ConfigWindow reversed() const;

    void wipe() noexcept;

private:
    std::vector<CellMatrix> configs_;
};

// Single step of the linear rule with periodic boundaries.
CellMatrix lca_step(const CellMatrix& config, RuleNumber rule);

// Forward memory step. With window (C^(t-k+1), ..., C^(t)) and rules (w_1..w_{k-1}),
// returns C^(t+1) = f_{w_1}(C^(t)) + ... + f_{w_{k-1}}(C^(t-k+2)) + C^(t-k+1).
// Throws ArityError when rules.size() != order - 1.
CellMatrix lmca_step(const ConfigWindow& window, std::span<const RuleNumber> rules);

// Returns the initial window followed by `steps` forward configurations.
std::vector<CellMatrix> lmca_evolve(const ConfigWindow& init, std::span<const RuleNumber> rules, std::size_t steps);

// Inverse memory step. The window is in inverse time order, i.e. it holds
// (C^(t+1), C^(t), ..., C^(t-k+2)); the result is C^(t-k+1) =
// C^(t+1) - f_{w_1}(C^(t)) - ... - f_{w_{k-1}}(C^(t-k+2)).
CellMatrix lmca_inverse_step(const ConfigWindow& window, std::span<const RuleNumber> rules);

std::vector<CellMatrix> lmca_inverse_evolve(const ConfigWindow& init, std::span<const RuleNumber> rules,
                                            std::size_t steps);

}  // namespace cashare
