#include "cashare/share_format.hpp"

#include <algorithm>
#include <map>

#include <boost/crc.hpp>

#include "cashare/errors.hpp"

namespace cashare {

std::string to_hex(const SchemeId& id) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(32);
    for (auto b : id) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

bool ShareHeader::same_scheme(const ShareHeader& other) const {
    return depth == other.depth && order == other.order && share_count == other.share_count &&
           offset == other.offset && rows == other.rows && cols == other.cols && scheme_id == other.scheme_id &&
           rules == other.rules;
}

std::string header_problem(const ShareHeader& h) {
    if (h.depth != 1 && h.depth != 8 && h.depth != 24) return "depth must be 1, 8 or 24";
    if (h.order < 2 || h.order > 255) return "order k must lie in [2, 255]";
    if (h.share_count < h.order || h.share_count > 255) return "share count n must satisfy k <= n <= 255";
    if (h.offset < h.order) return "offset m must be at least k";
    if (h.offset + h.share_count - 1 > 0xFFFF) return "m + n - 1 must fit in 16 bits";
    if (h.index < h.offset || h.index > h.offset + h.share_count - 1) return "index i must satisfy m <= i <= m+n-1";
    if (h.rows == 0 || h.cols == 0) return "rows and cols must be positive";
    if (h.rules.size() + 1 != h.order) return "rule count must equal k - 1";
    return {};
}

std::size_t payload_byte_length(unsigned depth, std::size_t rows, std::size_t cols) {
    switch (depth) {
        case 1: return rows * ((cols + 7) / 8);
        case 8: return rows * cols;
        default: return rows * cols * 3;
    }
}

std::size_t share_overhead_bytes(unsigned order) { return 37 + 2 * (std::size_t{order} - 1) + 8 + 4; }

namespace {

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size());
    return crc.checksum();
}

class Writer {
public:
    void u8(std::uint64_t v) { put(v, 1); }
    void u16(std::uint64_t v) { put(v, 2); }
    void u32(std::uint64_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
    std::vector<std::uint8_t>& buffer() { return out_; }

private:
    void put(std::uint64_t v, int width) {
        for (int i = width - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
    std::size_t offset() const noexcept { return pos_; }
    std::uint64_t u8() { return get(1); }
    std::uint64_t u16() { return get(2); }
    std::uint64_t u32() { return get(4); }
    std::uint64_t u64() { return get(8); }
    std::span<const std::uint8_t> take(std::size_t n) {
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

private:
    std::uint64_t get(int width) {
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v = (v << 8) | bytes_[pos_++];
        return v;
    }
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

constexpr std::size_t fixed_header_bytes = 37;
constexpr std::size_t rule_count_offset = 36;

void pack_payload(const CellMatrix& m, std::vector<std::uint8_t>& out) {
    const auto cells = m.cells();
    const std::size_t s = m.cols();
    switch (m.depth()) {
        case 1: {
            const std::size_t row_bytes = (s + 7) / 8;
            const auto base = out.size();
            out.resize(base + row_bytes * m.rows(), 0);
            for (std::size_t i = 0; i < m.rows(); ++i) {
                for (std::size_t j = 0; j < s; ++j) {
                    if (cells[i * s + j]) {
                        out[base + i * row_bytes + j / 8] |= static_cast<std::uint8_t>(0x80U >> (j % 8));
                    }
                }
            }
            break;
        }
        case 8:
            for (auto c : cells) out.push_back(static_cast<std::uint8_t>(c));
            break;
        default:
            for (auto c : cells) {
                out.push_back(static_cast<std::uint8_t>(c >> 16));
                out.push_back(static_cast<std::uint8_t>(c >> 8));
                out.push_back(static_cast<std::uint8_t>(c));
            }
    }
}

CellMatrix unpack_payload(std::span<const std::uint8_t> data, const ShareHeader& h, std::size_t data_offset) {
    const std::size_t r = h.rows, s = h.cols;
    std::vector<std::uint32_t> cells(r * s);
    switch (h.depth) {
        case 1: {
            const std::size_t row_bytes = (s + 7) / 8;
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t j = 0; j < s; ++j) {
                    cells[i * s + j] = (data[i * row_bytes + j / 8] >> (7 - j % 8)) & 1U;
                }
                if (s % 8 != 0) {
                    const auto last = i * row_bytes + row_bytes - 1;
                    if (data[last] & (0xFFU >> (s % 8))) {
                        throw FormatError("nonzero padding bits in b&w payload row " + std::to_string(i),
                                          data_offset + last);
                    }
                }
            }
            break;
        }
        case 8:
            std::copy(data.begin(), data.end(), cells.begin());
            break;
        default:
            for (std::size_t p = 0; p < cells.size(); ++p) {
                cells[p] = (std::uint32_t{data[3 * p]} << 16) | (std::uint32_t{data[3 * p + 1]} << 8) |
                           std::uint32_t{data[3 * p + 2]};
            }
    }
    return CellMatrix(r, s, h.depth, std::move(cells));
}

}  // namespace

std::vector<std::uint8_t> encode_share(const Share& share) {
    const auto& h = share.header;
    if (auto problem = header_problem(h); !problem.empty()) {
        throw EncodeError("invalid share header: " + problem);
    }
    if (share.payload.rows() != h.rows || share.payload.cols() != h.cols || share.payload.depth() != h.depth) {
        throw EncodeError("share payload does not match header shape or depth");
    }

    Writer w;
    w.bytes(share_magic);
    w.u8(share_format_version);
    w.u8(h.depth);
    w.u8(h.order);
    w.u8(h.share_count);
    w.u16(h.offset);
    w.u16(h.index);
    w.u32(h.rows);
    w.u32(h.cols);
    w.bytes(h.scheme_id);
    w.u8(h.rules.size());
    for (auto rule : h.rules) w.u16(rule.value());
    w.u64(payload_byte_length(h.depth, h.rows, h.cols));
    pack_payload(share.payload, w.buffer());
    w.u32(crc32(w.buffer()));
    return std::move(w.buffer());
}

Share decode_share(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < share_magic.size() || !std::equal(share_magic.begin(), share_magic.end(), bytes.begin())) {
        throw FormatError("not a CAS1 share (bad magic)", 0);
    }
    if (bytes.size() < 5) {
        throw FormatError("truncated share header", bytes.size());
    }
    if (bytes[4] != share_format_version) {
        throw FormatError("unsupported share format version " + std::to_string(bytes[4]), 4);
    }
    if (bytes.size() < fixed_header_bytes) {
        throw FormatError("truncated share header", bytes.size());
    }

    // Framing: total size implied by the rule count and payload length.
    const std::size_t rule_count = bytes[rule_count_offset];
    const std::size_t length_at = fixed_header_bytes + 2 * rule_count;
    if (bytes.size() < length_at + 8) {
        throw FormatError("truncated share header", bytes.size());
    }
    std::uint64_t payload_len = 0;
    for (std::size_t i = 0; i < 8; ++i) payload_len = (payload_len << 8) | bytes[length_at + i];
    const std::size_t payload_at = length_at + 8;
    const std::size_t available = bytes.size() - payload_at;
    if (available < 4 || payload_len > available - 4) {
        throw FormatError("truncated share: header declares " + std::to_string(payload_len) + " payload bytes",
                          bytes.size());
    }
    if (payload_len < available - 4) {
        throw FormatError("trailing bytes after share", payload_at + payload_len + 4);
    }

    const auto body = bytes.first(bytes.size() - 4);
    Reader tail(bytes.last(4));
    if (crc32(body) != tail.u32()) {
        throw IntegrityError("share CRC-32 mismatch");
    }

    Reader in(bytes);
    in.take(5);
    ShareHeader h;
    h.depth = static_cast<unsigned>(in.u8());
    h.order = static_cast<unsigned>(in.u8());
    h.share_count = static_cast<unsigned>(in.u8());
    h.offset = static_cast<unsigned>(in.u16());
    h.index = static_cast<unsigned>(in.u16());
    h.rows = static_cast<std::uint32_t>(in.u32());
    h.cols = static_cast<std::uint32_t>(in.u32());
    const auto id = in.take(16);
    std::copy(id.begin(), id.end(), h.scheme_id.begin());
    in.u8();
    for (std::size_t l = 0; l < rule_count; ++l) {
        const auto at = in.offset();
        const auto v = in.u16();
        if (v > RuleNumber::max_value) {
            throw FormatError("rule number " + std::to_string(v) + " out of range", at);
        }
        h.rules.emplace_back(static_cast<unsigned>(v));
    }
    if (auto problem = header_problem(h); !problem.empty()) {
        throw FormatError("invalid share header: " + problem, 5);
    }
    if (payload_len != payload_byte_length(h.depth, h.rows, h.cols)) {
        throw FormatError("payload length " + std::to_string(payload_len) + " does not match " +
                              std::to_string(h.rows) + "x" + std::to_string(h.cols) + " cells of depth " +
                              std::to_string(h.depth),
                          length_at);
    }

    auto payload = unpack_payload(bytes.subspan(payload_at, payload_len), h, payload_at);
    return Share{std::move(h), std::move(payload)};
}

ShareHeader peek_share_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < share_magic.size() || !std::equal(share_magic.begin(), share_magic.end(), bytes.begin())) {
        throw FormatError("not a CAS1 share (bad magic)", 0);
    }
    if (bytes.size() < fixed_header_bytes ||
        bytes.size() < fixed_header_bytes + 2 * std::size_t{bytes[rule_count_offset]}) {
        throw FormatError("truncated share header", bytes.size());
    }
    Reader in(bytes);
    in.take(5);
    ShareHeader h;
    h.depth = static_cast<unsigned>(in.u8());
    h.order = static_cast<unsigned>(in.u8());
    h.share_count = static_cast<unsigned>(in.u8());
    h.offset = static_cast<unsigned>(in.u16());
    h.index = static_cast<unsigned>(in.u16());
    h.rows = static_cast<std::uint32_t>(in.u32());
    h.cols = static_cast<std::uint32_t>(in.u32());
    const auto id = in.take(16);
    std::copy(id.begin(), id.end(), h.scheme_id.begin());
    const auto rule_count = in.u8();
    for (std::uint64_t l = 0; l < rule_count; ++l) {
        h.rules.emplace_back(static_cast<unsigned>(in.u16() & RuleNumber::max_value));
    }
    return h;
}

ValidatedSet validate_share_set(std::span<const Share> shares) {
    if (shares.empty()) {
        throw InsufficientSharesError("no shares supplied; longest consecutive run: 0", 0);
    }
    const auto& ref = shares.front().header;
    std::map<unsigned, const Share*> by_index;
    for (const auto& share : shares) {
        if (share.header.scheme_id != ref.scheme_id) {
            throw MixedSchemeError("shares come from different splits (scheme " + to_hex(ref.scheme_id) + " vs " +
                                   to_hex(share.header.scheme_id) + ")");
        }
        if (!share.header.same_scheme(ref)) {
            throw MixedSchemeError("shares of scheme " + to_hex(ref.scheme_id) + " disagree on parameters");
        }
        auto [it, inserted] = by_index.emplace(share.header.index, &share);
        if (!inserted && it->second->payload != share.payload) {
            throw MixedSchemeError("conflicting shares for index " + std::to_string(share.header.index));
        }
    }

    const std::size_t k = ref.order;
    std::size_t longest = 0;
    std::size_t run = 0;
    unsigned prev = 0;
    for (auto it = by_index.begin(); it != by_index.end(); ++it) {
        run = (run > 0 && it->first == prev + 1) ? run + 1 : 1;
        prev = it->first;
        longest = std::max(longest, run);
        if (run == k) {
            const unsigned first = it->first - static_cast<unsigned>(k - 1);
            ValidatedSet result;
            result.alpha = first - ref.offset;
            for (unsigned i = first; i <= it->first; ++i) result.selected.push_back(*by_index.at(i));
            result.common = result.selected.front().header;
            return result;
        }
    }
    throw InsufficientSharesError("need " + std::to_string(k) +
                                      " consecutive shares; longest consecutive run: " + std::to_string(longest),
                                  longest);
}

}  // namespace cashare
