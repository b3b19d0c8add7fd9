#pragma once

// The "CAS1" share container. All integers are big-endian.
//
//   offset  size  field
//        0     4  magic "CAS1" (43 41 53 31)
//        4     1  format version (1)
//        5     1  depth b (1, 8 or 24)
//        6     1  order k
//        7     1  share count n
//        8     2  offset m
//       10     2  time index i of this share's configuration, m <= i <= m+n-1
//       12     4  rows r
//       16     4  cols s
//       20    16  scheme id
//       36     1  rule count (k - 1)
//       37  2(k-1) rule numbers
//        .     8  payload length in bytes
//        .     L  cells, row-major: b=1 packs 8 cells per byte MSB first with
//                 every row padded to a byte boundary; b=8 one byte per cell;
//                 b=24 three bytes per cell, red first
//        .     4  CRC-32 (IEEE) of every preceding byte

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cashare/ca.hpp"

namespace cashare {

using SchemeId = std::array<std::uint8_t, 16>;

std::string to_hex(const SchemeId& id);

inline constexpr std::array<std::uint8_t, 4> share_magic{0x43, 0x41, 0x53, 0x31};
inline constexpr std::uint8_t share_format_version = 1;

struct ShareHeader {
    unsigned depth = 8;
    unsigned order = 2;        // k
    unsigned share_count = 2;  // n
    unsigned offset = 2;       // m
    unsigned index = 2;        // i
    std::uint32_t rows = 1;
    std::uint32_t cols = 1;
    SchemeId scheme_id{};
    std::vector<RuleNumber> rules;

    // Equal in everything but the time index.
    bool same_scheme(const ShareHeader& other) const;

    friend bool operator==(const ShareHeader&, const ShareHeader&) = default;
};

struct Share {
    ShareHeader header;
    CellMatrix payload;

    // Position among the n shares (i - m).
    unsigned participant() const noexcept { return header.index - header.offset; }

    friend bool operator==(const Share&, const Share&) = default;
};

// Empty string when the header satisfies every format invariant, else a description.
std::string header_problem(const ShareHeader& header);

std::size_t payload_byte_length(unsigned depth, std::size_t rows, std::size_t cols);
// Bytes in an encoded share beyond the payload: 49 + 2(k - 1).
std::size_t share_overhead_bytes(unsigned order);

// Throws EncodeError for an invalid header or a payload that does not match it.
std::vector<std::uint8_t> encode_share(const Share& share);

// Throws FormatError (bad magic, version, framing or field values) or
// IntegrityError (CRC mismatch).
Share decode_share(std::span<const std::uint8_t> bytes);

// Reads the header fields without checking the CRC or field invariants.
// Throws FormatError when the bytes are too short or the magic is wrong.
ShareHeader peek_share_header(std::span<const std::uint8_t> bytes);

struct ValidatedSet {
    ShareHeader common;          // header of the first selected share
    std::size_t alpha = 0;       // first selected index minus m
    std::vector<Share> selected;  // k shares, ascending index
};

// Checks that the shares belong to one scheme and picks the k consecutive shares
// with the lowest indices. Throws MixedSchemeError or InsufficientSharesError.
ValidatedSet validate_share_set(std::span<const Share> shares);

}  // namespace cashare
