#include <doctest.h>

#include <boost/crc.hpp>

#include "cashare/errors.hpp"
#include "cashare/image.hpp"
#include "cashare/share_format.hpp"
#include "oracles.hpp"

using namespace cashare;

namespace {

SchemeId counting_id() {
    SchemeId id{};
    for (std::size_t q = 0; q < id.size(); ++q) id[q] = static_cast<std::uint8_t>(q);
    return id;
}

Share golden_1x1() {
    ShareHeader h;
    h.depth = 8;
    h.order = 2;
    h.share_count = 2;
    h.offset = 2;
    h.index = 2;
    h.scheme_id = counting_id();
    h.rules = {RuleNumber(232)};
    return Share{h, CellMatrix(1, 1, 8, {0x17})};
}

Share golden_1x9() {
    auto share = golden_1x1();
    share.header.depth = 1;
    share.header.cols = 9;
    share.payload = CellMatrix(1, 9, 1, {1, 0, 0, 1, 0, 1, 1, 0, 1});
    return share;
}

ShareHeader header_for(unsigned k, unsigned n, unsigned m, unsigned index) {
    ShareHeader h;
    h.depth = 8;
    h.order = k;
    h.share_count = n;
    h.offset = m;
    h.index = index;
    h.rows = 2;
    h.cols = 2;
    h.scheme_id = counting_id();
    for (unsigned l = 1; l < k; ++l) h.rules.emplace_back(232);
    return h;
}

std::vector<Share> shares_at(unsigned k, unsigned n, unsigned m, std::initializer_list<unsigned> indices) {
    std::vector<Share> out;
    for (auto i : indices) out.push_back(Share{header_for(k, n, m, i), CellMatrix(2, 2, 8, {i, i, i, i})});
    return out;
}

std::vector<unsigned> indices_of(const ValidatedSet& set) {
    std::vector<unsigned> out;
    for (const auto& s : set.selected) out.push_back(s.header.index);
    return out;
}

}  // namespace

TEST_CASE("golden vectors round trip bit-exactly") {
    for (const auto& [name, share] : {std::pair{"golden_1x1.cas", golden_1x1()}, {"golden_1x9.cas", golden_1x9()}}) {
        const auto bytes = read_file_bytes(oracle::data_dir() / name);
        CHECK(encode_share(share) == bytes);
        CHECK(decode_share(bytes) == share);
        CHECK(encode_share(decode_share(bytes)) == bytes);
    }
    CHECK(read_file_bytes(oracle::data_dir() / "golden_1x1.cas").size() == 52);
    CHECK(read_file_bytes(oracle::data_dir() / "golden_1x9.cas").size() == 53);
}

TEST_CASE("every single-byte corruption is rejected") {
    for (const char* name : {"golden_1x1.cas", "golden_1x9.cas"}) {
        const auto good = read_file_bytes(oracle::data_dir() / name);
        const std::size_t rule_count_at = 36;
        const std::size_t length_at = 37 + 2;
        for (std::size_t pos = 0; pos < good.size(); ++pos) {
            for (unsigned delta = 1; delta < 256; ++delta) {
                auto bad = good;
                bad[pos] ^= static_cast<std::uint8_t>(delta);
                const bool framing = pos < 5 || pos == rule_count_at || (pos >= length_at && pos < length_at + 8);
                if (framing) {
                    CHECK_THROWS_AS(decode_share(bad), FormatError);
                } else {
                    CHECK_THROWS_AS(decode_share(bad), IntegrityError);
                }
            }
        }
    }
}

TEST_CASE("truncation and trailing bytes") {
    const auto good = read_file_bytes(oracle::data_dir() / "golden_1x1.cas");
    for (std::size_t len = 0; len < good.size(); ++len) {
        CHECK_THROWS_AS(decode_share(std::span(good).first(len)), FormatError);
    }
    auto longer = good;
    longer.push_back(0);
    CHECK_THROWS_AS(decode_share(longer), FormatError);
}

TEST_CASE("semantic problems behind a valid CRC are format errors") {
    auto share = golden_1x1();
    share.header.index = 9;
    CHECK_THROWS_AS(encode_share(share), EncodeError);
    share = golden_1x1();
    share.payload = CellMatrix(1, 2, 8);
    CHECK_THROWS_AS(encode_share(share), EncodeError);
    share = golden_1x1();
    share.header.depth = 4;
    CHECK_FALSE(header_problem(share.header).empty());

    // Nonzero padding bits in a b=1 payload, re-sealed with a valid CRC.
    auto bytes = read_file_bytes(oracle::data_dir() / "golden_1x9.cas");
    bytes[48] |= 0x01;
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size() - 4);
    const auto sum = crc.checksum();
    for (int q = 0; q < 4; ++q) bytes[bytes.size() - 4 + q] = static_cast<std::uint8_t>(sum >> (24 - 8 * q));
    CHECK_THROWS_AS(decode_share(bytes), FormatError);
}

TEST_CASE("header overhead") {
    for (unsigned k = 2; k <= 6; ++k) CHECK(share_overhead_bytes(k) == 49 + 2 * (k - 1));
    CHECK(encode_share(golden_1x1()).size() == share_overhead_bytes(2) + 1);
    CHECK(payload_byte_length(1, 3, 10) == 6);
    CHECK(payload_byte_length(8, 3, 10) == 30);
    CHECK(payload_byte_length(24, 3, 10) == 90);
}

TEST_CASE("peek reads the header without checking the CRC") {
    auto bytes = read_file_bytes(oracle::data_dir() / "golden_1x1.cas");
    bytes.back() ^= 0xFF;
    CHECK(peek_share_header(bytes) == golden_1x1().header);
}

TEST_CASE("random shares round trip") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned k = 2 + rng() % 4;
        const unsigned n = k + rng() % 3;
        const unsigned m = k + rng() % 3;
        const unsigned depth = std::array{1U, 8U, 24U}[rng() % 3];
        ShareHeader h;
        h.depth = depth;
        h.order = k;
        h.share_count = n;
        h.offset = m;
        h.index = m + rng() % n;
        h.rows = 1 + rng() % 20;
        h.cols = 1 + rng() % 20;
        for (auto& b : h.scheme_id) b = static_cast<std::uint8_t>(rng());
        h.rules = oracle::random_rules(rng, k - 1);
        const Share share{h, oracle::random_matrix(rng, h.rows, h.cols, depth)};
        const auto bytes = encode_share(share);
        CHECK(bytes.size() == share_overhead_bytes(k) + payload_byte_length(depth, h.rows, h.cols));
        CHECK(decode_share(bytes) == share);
    }
}

TEST_CASE("share set selection") {
    SUBCASE("window at alpha 2") {
        const auto shares = shares_at(3, 5, 3, {7, 5, 6});
        const auto set = validate_share_set(shares);
        CHECK(set.alpha == 2);
        CHECK(indices_of(set) == std::vector<unsigned>{5, 6, 7});
    }
    SUBCASE("lowest consecutive pair wins") {
        const auto set = validate_share_set(shares_at(2, 3, 2, {2, 3, 4}));
        CHECK(set.alpha == 0);
        CHECK(indices_of(set) == std::vector<unsigned>{2, 3});
    }
    SUBCASE("non-consecutive shares") {
        const auto shares = shares_at(2, 3, 2, {2, 4});
        try {
            validate_share_set(shares);
            FAIL("accepted non-consecutive shares");
        } catch (const InsufficientSharesError& e) {
            CHECK(e.longest_run() == 1);
            CHECK(std::string(e.what()).find("longest consecutive run: 1") != std::string::npos);
        }
        CHECK_THROWS_AS(validate_share_set(shares_at(3, 5, 3, {3, 4, 6, 7})), InsufficientSharesError);
        CHECK_THROWS_AS(validate_share_set(shares_at(3, 5, 3, {3})), InsufficientSharesError);
        CHECK_THROWS_AS(validate_share_set(std::vector<Share>{}), InsufficientSharesError);
    }
    SUBCASE("duplicates count once") {
        CHECK_THROWS_AS(validate_share_set(shares_at(2, 3, 2, {3, 3})), InsufficientSharesError);
        CHECK(validate_share_set(shares_at(2, 3, 2, {3, 3, 4})).alpha == 1);
    }
    SUBCASE("mixed schemes") {
        auto shares = shares_at(2, 3, 2, {2, 3});
        shares[1].header.scheme_id[0] ^= 1;
        CHECK_THROWS_AS(validate_share_set(shares), MixedSchemeError);

        shares = shares_at(2, 3, 2, {2, 3});
        shares[1].header.rules[0] = RuleNumber(16);
        CHECK_THROWS_AS(validate_share_set(shares), MixedSchemeError);

        shares = shares_at(2, 3, 2, {2, 3, 3});
        shares[2].payload.set(0, 0, 99);
        CHECK_THROWS_AS(validate_share_set(shares), MixedSchemeError);
    }
}
