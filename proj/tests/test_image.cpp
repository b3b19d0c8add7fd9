#include <doctest.h>

#include <string>

#include "cashare/errors.hpp"
#include "cashare/image.hpp"
#include "oracles.hpp"

using namespace cashare;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("pixel to cell conversions") {
    CHECK(image_to_matrix(Image::bilevel(1, 1, {1})) == CellMatrix(1, 1, 1, {1}));
    CHECK(image_to_matrix(Image::bilevel(1, 2, {0, 7})) == CellMatrix(1, 2, 1, {0, 1}));
    CHECK(image_to_matrix(Image::gray(1, 1, {200})) == CellMatrix(1, 1, 8, {200}));
    CHECK(image_to_matrix(Image::color(1, 1, {1, 2, 3})) == CellMatrix(1, 1, 24, {66051}));

    CHECK(matrix_to_image(CellMatrix(1, 1, 24, {66051}), PixelDepth::Color).rgb(0, 0) ==
          std::array<std::uint8_t, 3>{1, 2, 3});
    CHECK(matrix_to_image(CellMatrix(1, 1, 1, {1}), PixelDepth::Bilevel).black(0, 0));
    CHECK_THROWS_AS(matrix_to_image(CellMatrix(1, 1, 8, {256 - 1}), PixelDepth::Bilevel), DomainError);
    CHECK_THROWS_AS(matrix_to_image(CellMatrix(1, 1, 24, {256}), PixelDepth::Gray), DomainError);
    CHECK_THROWS_AS(pixel_depth_from_bits(4), DomainError);
}

TEST_CASE("conversion round trip") {
    std::mt19937_64 rng(11);
    for (auto depth : {PixelDepth::Bilevel, PixelDepth::Gray, PixelDepth::Color}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto m = oracle::random_matrix(rng, 1 + rng() % 12, 1 + rng() % 12, static_cast<unsigned>(depth));
            const auto image = matrix_to_image(m, depth);
            CHECK(image_to_matrix(image) == m);
            CHECK(decode_pnm(encode_pnm(image)) == image);
        }
    }
}

TEST_CASE("golden files decode") {
    const auto gray = read_pnm_file(oracle::data_dir() / "gray_2x2.pgm");
    CHECK(gray == Image::gray(2, 2, {0x00, 0x40, 0x80, 0xff}));

    const auto bw = read_pnm_file(oracle::data_dir() / "bw_3x10.pbm");
    CHECK(bw.rows() == 3);
    CHECK(bw.cols() == 10);
    const std::string rows[3] = {"1000000001", "0101010101", "1111111111"};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 10; ++j) CHECK(bw.black(i, j) == (rows[i][j] == '1'));

    const auto rgb = read_pnm_file(oracle::data_dir() / "rgb_1x2.ppm");
    CHECK(rgb == Image::color(1, 2, {1, 2, 3, 0xff, 0x80, 0}));
    CHECK(image_to_matrix(rgb) == CellMatrix(1, 2, 24, {0x010203, 0xff8000}));

    CHECK(read_pnm_file(oracle::data_dir() / "commented_gray.pgm") == gray);
}

TEST_CASE("canonical files re-encode byte for byte") {
    for (const char* name : {"gray_2x2.pgm", "bw_3x10.pbm", "rgb_1x2.ppm"}) {
        const auto bytes = read_file_bytes(oracle::data_dir() / name);
        CHECK(encode_pnm(decode_pnm(bytes)) == bytes);
    }
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(decode_pnm(bytes_of("P5\n1 1\n65535\n\x01\x02")), FormatError);
    CHECK_THROWS_AS(decode_pnm(bytes_of("P2\n1 1\n255\n0")), FormatError);
    CHECK_THROWS_AS(decode_pnm(bytes_of("Q5\n1 1\n255\n\x01")), FormatError);
    CHECK_THROWS_AS(decode_pnm(bytes_of("P5\n0 1\n255\n")), FormatError);
    CHECK_THROWS_AS(decode_pnm(bytes_of("P5\n1 1\n")), FormatError);
    try {
        decode_pnm(bytes_of("P5\n2 2\n255\n\x01\x02\x03"));
        FAIL("truncated raster accepted");
    } catch (const FormatError& e) {
        CHECK(e.offset() == 14);
    }

    const std::vector<std::uint8_t> unequal{10, 10, 10, 1, 2, 3};
    CHECK_THROWS_AS(Image::gray_from_rgb(1, 2, unequal), FormatError);
    const std::vector<std::uint8_t> equal{10, 10, 10, 7, 7, 7};
    CHECK(Image::gray_from_rgb(1, 2, equal) == Image::gray(1, 2, {10, 7}));
}
