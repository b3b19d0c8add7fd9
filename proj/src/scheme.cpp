#include "cashare/scheme.hpp"

#include <string>

#include "cashare/errors.hpp"

namespace cashare {

void validate(const SchemeParams& p) {
    if (p.order < 2) throw ParamError("k must be at least 2");
    if (p.order > p.share_count) {
        throw ParamError("k exceeds n (k=" + std::to_string(p.order) + ", n=" + std::to_string(p.share_count) + ")");
    }
    if (p.share_count > 255) throw ParamError("n must not exceed 255");
    if (p.offset < p.order) {
        throw ParamError("m must be at least k (m=" + std::to_string(p.offset) + ", k=" + std::to_string(p.order) +
                         ")");
    }
    if (p.offset + p.share_count - 1 > 0xFFFF) throw ParamError("m + n - 1 must not exceed 65535");
    if (p.depth != 1 && p.depth != 8 && p.depth != 24) {
        throw ParamError("depth must be 1, 8 or 24 (got " + std::to_string(p.depth) + ")");
    }
    if (p.rows == 0 || p.cols == 0 || p.rows > 0xFFFFFFFFu || p.cols > 0xFFFFFFFFu) {
        throw ParamError("image dimensions must be positive 32-bit values");
    }
    if (p.rules.size() + 1 != p.order) {
        throw ParamError("expected " + std::to_string(p.order - 1) + " rule numbers, got " +
                         std::to_string(p.rules.size()));
    }
}

SchemeParams setup_with_rules(unsigned order, unsigned share_count, std::optional<unsigned> offset, unsigned depth,
                              std::size_t rows, std::size_t cols, std::vector<RuleNumber> rules,
                              EntropySource& entropy) {
    SchemeParams p;
    p.order = order;
    p.share_count = share_count;
    p.offset = offset.value_or(order);
    p.depth = depth;
    p.rows = rows;
    p.cols = cols;
    p.rules = std::move(rules);
    validate(p);
    entropy.fill(p.scheme_id);
    return p;
}

SchemeParams setup(unsigned order, unsigned share_count, std::optional<unsigned> offset, unsigned depth,
                   std::size_t rows, std::size_t cols, EntropySource& entropy) {
    if (order < 2) throw ParamError("k must be at least 2");
    if (order > share_count) {
        throw ParamError("k exceeds n (k=" + std::to_string(order) + ", n=" + std::to_string(share_count) + ")");
    }
    std::vector<RuleNumber> rules;
    for (unsigned l = 1; l < order; ++l) {
        // 512 divides 2^32, so masking keeps the draw uniform.
        rules.emplace_back(entropy.next_u32() & RuleNumber::max_value);
    }
    return setup_with_rules(order, share_count, offset, depth, rows, cols, std::move(rules), entropy);
}

ShareHeader share_header(const SchemeParams& p, unsigned index) {
    ShareHeader h;
    h.depth = p.depth;
    h.order = p.order;
    h.share_count = p.share_count;
    h.offset = p.offset;
    h.index = index;
    h.rows = static_cast<std::uint32_t>(p.rows);
    h.cols = static_cast<std::uint32_t>(p.cols);
    h.scheme_id = p.scheme_id;
    h.rules = p.rules;
    return h;
}

std::vector<CellMatrix> share_configurations(ConfigWindow init, std::span<const RuleNumber> rules, unsigned offset,
                                             unsigned share_count, std::size_t* forward_steps) {
    const std::size_t k = init.order();
    const std::size_t last = std::size_t{offset} + share_count - 1;
    if (offset < k) {
        throw ParamError("m must be at least k");
    }
    std::vector<CellMatrix> shares;
    shares.reserve(share_count);
    ConfigWindow window = std::move(init);
    std::size_t steps = 0;
    for (std::size_t t = k; t <= last; ++t) {
        auto next = lmca_step(window, rules);
        ++steps;
        if (t >= offset) {
            shares.push_back(next);
        }
        window.advance(std::move(next));
    }
    window.wipe();
    if (forward_steps) *forward_steps = steps;
    return shares;
}

std::vector<Share> split_with_complement(const CellMatrix& secret, std::vector<CellMatrix> complement,
                                         const SchemeParams& params, SplitTrace* trace) {
    validate(params);
    if (secret.rows() != params.rows || secret.cols() != params.cols || secret.depth() != params.depth) {
        throw ShapeError("secret does not match the scheme's dimensions or depth");
    }
    if (complement.size() + 1 != params.order) {
        throw ShapeError("expected " + std::to_string(params.order - 1) + " random configurations");
    }

    std::vector<CellMatrix> init;
    init.reserve(params.order);
    init.push_back(secret);
    for (auto& c : complement) {
        init.push_back(c);
        c.wipe();
    }

    std::size_t steps = 0;
    auto configs = share_configurations(ConfigWindow(std::move(init)), params.rules, params.offset,
                                        params.share_count, &steps);
    if (trace) trace->forward_steps = steps;

    std::vector<Share> shares;
    shares.reserve(configs.size());
    for (std::size_t j = 0; j < configs.size(); ++j) {
        shares.push_back(Share{share_header(params, params.offset + static_cast<unsigned>(j)), std::move(configs[j])});
    }
    return shares;
}

std::vector<Share> split(const CellMatrix& secret, const SchemeParams& params, BbsGenerator& generator,
                         SplitTrace* trace) {
    validate(params);
    std::vector<CellMatrix> complement;
    for (unsigned l = 1; l < params.order; ++l) {
        complement.push_back(bbs_fill_matrix(generator, params.rows, params.cols, params.depth));
    }
    return split_with_complement(secret, std::move(complement), params, trace);
}

CellMatrix recover(std::span<const Share> shares, RecoveryTrace* trace) {
    auto set = validate_share_set(shares);
    const auto& h = set.common;

    // Newest original time first: (C^(m+a+k-1), ..., C^(m+a)).
    std::vector<CellMatrix> inverse_init;
    for (auto it = set.selected.rbegin(); it != set.selected.rend(); ++it) {
        inverse_init.push_back(std::move(it->payload));
    }
    ConfigWindow window(std::move(inverse_init));

    const std::size_t target = h.offset + set.alpha;
    std::size_t steps = 0;
    while (steps < target) {
        window.advance(lmca_inverse_step(window, h.rules));
        ++steps;
    }
    CellMatrix secret = window.newest();
    window.wipe();

    if (trace) {
        trace->alpha = set.alpha;
        trace->inverse_steps = steps;
        trace->used_indices.clear();
        for (const auto& s : set.selected) trace->used_indices.push_back(s.header.index);
    }
    return secret;
}

}  // namespace cashare
