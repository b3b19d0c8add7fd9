#include "cashare/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include <boost/math/distributions/chi_squared.hpp>

#include "cashare/errors.hpp"
#include "cashare/scheme.hpp"

namespace cashare {

std::string to_string(CensusVerdict v) {
    switch (v) {
        case CensusVerdict::Perfect: return "perfect";
        case CensusVerdict::Determined: return "determined";
        default: return "leaky";
    }
}

bool CensusReport::consecutive_determined() const {
    bool any = false;
    for (const auto& s : subsets) {
        if (!s.consecutive) continue;
        any = true;
        if (!s.determined) return false;
    }
    return any;
}

namespace {

// Matrix whose cell p is base-c digit p of `code`.
CellMatrix matrix_from_code(std::uint64_t code, std::size_t rows, std::size_t cols, unsigned depth) {
    std::vector<std::uint32_t> cells(rows * cols);
    const std::uint64_t mask = (std::uint64_t{1} << depth) - 1;
    for (std::size_t p = 0; p < cells.size(); ++p) {
        cells[p] = static_cast<std::uint32_t>((code >> (depth * p)) & mask);
    }
    return CellMatrix(rows, cols, depth, std::move(cells));
}

std::uint64_t code_of(const CellMatrix& m) {
    std::uint64_t code = 0;
    const auto cells = m.cells();
    for (std::size_t p = cells.size(); p-- > 0;) {
        code = (code << m.depth()) | cells[p];
    }
    return code;
}

void for_each_subset(unsigned n, unsigned j, const std::function<void(const std::vector<unsigned>&)>& visit) {
    std::vector<unsigned> idx(j);
    for (unsigned i = 0; i < j; ++i) idx[i] = i;
    for (;;) {
        visit(idx);
        int pos = static_cast<int>(j) - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - j + static_cast<unsigned>(pos)) --pos;
        if (pos < 0) return;
        ++idx[static_cast<std::size_t>(pos)];
        for (auto q = static_cast<std::size_t>(pos) + 1; q < j; ++q) idx[q] = idx[q - 1] + 1;
    }
}

}  // namespace

CensusReport perfectness_census(const CensusParams& p) {
    if (p.modulus < 2 || !std::has_single_bit(p.modulus) || p.modulus > (std::uint64_t{1} << CellMatrix::max_depth)) {
        throw ParamError("census modulus must be a power of two in [2, 2^24]");
    }
    if (p.rows == 0 || p.cols == 0) throw ParamError("census grid must be non-empty");
    if (p.order < 2) throw ParamError("k must be at least 2");
    if (p.rules.size() + 1 != p.order) throw ParamError("census needs k - 1 rules");
    if (p.offset < p.order) throw ParamError("m must be at least k");
    if (p.share_count == 0) throw ParamError("n must be positive");
    if (p.observed == 0 || p.observed > p.share_count) throw ParamError("observed subset size must lie in [1, n]");

    const auto depth = static_cast<unsigned>(std::countr_zero(p.modulus));
    const std::size_t cells = p.rows * p.cols;
    const std::size_t share_bits = depth * cells;
    if (share_bits * p.order > 20) {
        throw TooLargeError("census would enumerate more than 2^20 cases");
    }
    if (share_bits * p.share_count > 64) {
        throw TooLargeError("census shares do not fit the 64-bit packing");
    }

    CensusReport report;
    report.params = p;
    report.secret_count = std::uint64_t{1} << share_bits;
    report.total_cases = std::uint64_t{1} << (share_bits * p.order);
    const std::uint64_t secret_mask = report.secret_count - 1;

    // Packed share codes per case; share q occupies bits [q*share_bits, (q+1)*share_bits).
    std::vector<std::uint64_t> packed(report.total_cases);
    for (std::uint64_t c = 0; c < report.total_cases; ++c) {
        std::vector<CellMatrix> init;
        for (unsigned l = 0; l < p.order; ++l) {
            init.push_back(matrix_from_code((c >> (share_bits * l)) & secret_mask, p.rows, p.cols, depth));
        }
        const auto shares = share_configurations(ConfigWindow(std::move(init)), p.rules, p.offset, p.share_count);
        std::uint64_t code = 0;
        for (std::size_t q = 0; q < shares.size(); ++q) {
            code |= code_of(shares[q]) << (share_bits * q);
        }
        packed[c] = code;
    }

    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries(report.total_cases);
    for_each_subset(p.share_count, p.observed, [&](const std::vector<unsigned>& subset) {
        for (std::uint64_t c = 0; c < report.total_cases; ++c) {
            std::uint64_t key = 0;
            for (std::size_t q = 0; q < subset.size(); ++q) {
                key |= ((packed[c] >> (share_bits * subset[q])) & secret_mask) << (share_bits * q);
            }
            entries[c] = {key, c & secret_mask};
        }
        std::sort(entries.begin(), entries.end());

        SubsetTally tally;
        tally.participants = subset;
        tally.consecutive = subset.back() - subset.front() + 1 == subset.size();
        tally.min_support = std::numeric_limits<std::size_t>::max();
        tally.uniform = true;
        tally.determined = true;

        for (std::size_t g = 0; g < entries.size();) {
            std::size_t end = g;
            while (end < entries.size() && entries[end].first == entries[g].first) ++end;

            std::size_t support = 0;
            std::uint64_t first_count = 0;
            bool equal_counts = true;
            ConditionalDistribution dist;
            for (std::size_t a = g; a < end;) {
                std::size_t b = a;
                while (b < end && entries[b].second == entries[a].second) ++b;
                const std::uint64_t count = b - a;
                if (support == 0) first_count = count;
                equal_counts = equal_counts && count == first_count;
                ++support;
                if (p.record_distributions) dist.secret_counts[entries[a].second] = count;
                a = b;
            }

            ++tally.observations;
            tally.min_support = std::min(tally.min_support, support);
            tally.max_support = std::max(tally.max_support, support);
            tally.uniform = tally.uniform && equal_counts && support == report.secret_count;
            tally.determined = tally.determined && support == 1;
            if (p.record_distributions) {
                const std::uint64_t key = entries[g].first;
                const std::uint64_t cell_mask = (std::uint64_t{1} << depth) - 1;
                for (std::size_t d = 0; d < cells * subset.size(); ++d) {
                    dist.observed.push_back(static_cast<std::uint32_t>((key >> (depth * d)) & cell_mask));
                }
                tally.distributions.push_back(std::move(dist));
            }
            g = end;
        }

        tally.verdict = tally.uniform      ? CensusVerdict::Perfect
                        : tally.determined ? CensusVerdict::Determined
                                           : CensusVerdict::Leaky;
        report.subsets.push_back(std::move(tally));
    });

    const bool all_perfect = std::all_of(report.subsets.begin(), report.subsets.end(),
                                         [](const SubsetTally& s) { return s.uniform; });
    const bool all_determined = std::all_of(report.subsets.begin(), report.subsets.end(),
                                            [](const SubsetTally& s) { return s.determined; });
    report.verdict = all_perfect ? CensusVerdict::Perfect
                     : all_determined ? CensusVerdict::Determined
                                      : CensusVerdict::Leaky;
    return report;
}

// ---------------------------------------------------------------------------

namespace {

double pearson(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.empty()) return 1.0;
    double mx = 0, my = 0;
    for (auto [x, y] : pairs) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pairs.size());
    my /= static_cast<double>(pairs.size());
    double sxy = 0, sxx = 0, syy = 0;
    for (auto [x, y] : pairs) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 1.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

bool UniformityStats::uniform_at(double significance) const {
    return std::all_of(channels.begin(), channels.end(),
                       [&](const ChannelStats& c) { return c.p_value >= significance; });
}

UniformityStats uniformity_stats(const CellMatrix& m) {
    UniformityStats stats;
    const unsigned depth = m.depth();
    const unsigned channel_count = depth <= 8 ? 1 : (depth + 7) / 8;
    const auto cells = m.cells();
    const std::size_t r = m.rows(), s = m.cols();

    for (unsigned ch = 0; ch < channel_count; ++ch) {
        // Channel 0 is the most significant byte.
        const unsigned low = channel_count == 1 ? 0 : 8 * (channel_count - 1 - ch);
        const unsigned width = channel_count == 1 ? depth : std::min(8U, depth - low);
        const std::uint32_t mask = (std::uint32_t{1} << width) - 1;
        auto value = [&](std::size_t i, std::size_t j) { return (cells[i * s + j] >> low) & mask; };

        ChannelStats c;
        c.histogram.assign(std::size_t{1} << width, 0);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < s; ++j) ++c.histogram[value(i, j)];

        const double expected = static_cast<double>(cells.size()) / static_cast<double>(c.histogram.size());
        for (auto h : c.histogram) {
            const double d = static_cast<double>(h) - expected;
            c.chi_square += d * d / expected;
        }
        c.degrees_of_freedom = c.histogram.size() - 1;
        boost::math::chi_squared dist(static_cast<double>(c.degrees_of_freedom));
        c.p_value = boost::math::cdf(boost::math::complement(dist, c.chi_square));

        std::vector<std::pair<double, double>> horizontal, vertical;
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < s; ++j) {
                if (j + 1 < s) horizontal.emplace_back(value(i, j), value(i, j + 1));
                if (i + 1 < r) vertical.emplace_back(value(i, j), value(i + 1, j));
            }
        }
        c.horizontal_correlation = pearson(horizontal);
        c.vertical_correlation = pearson(vertical);
        stats.channels.push_back(std::move(c));
    }
    return stats;
}

double information_rate(const Share& share, std::size_t secret_rows, std::size_t secret_cols, unsigned depth) {
    const double secret_bits = static_cast<double>(secret_rows * secret_cols) * depth;
    const double share_bits = static_cast<double>(share.payload.rows() * share.payload.cols()) * share.payload.depth();
    return secret_bits / share_bits;
}

}  // namespace cashare
