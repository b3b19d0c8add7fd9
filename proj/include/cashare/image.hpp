#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cashare/ca.hpp"

namespace cashare {

// Bits per pixel: black & white, 8-bit gray, or 24-bit RGB.
enum class PixelDepth : unsigned { Bilevel = 1, Gray = 8, Color = 24 };

// Throws DomainError for anything other than 1, 8 or 24.
PixelDepth pixel_depth_from_bits(unsigned bits);

class Image {
public:
    // One byte per pixel, nonzero meaning black.
    static Image bilevel(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> black);
    static Image gray(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> levels);
    // Interleaved R, G, B bytes.
    static Image color(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> rgb);
    // RGB pixels that must satisfy R = G = B; otherwise FormatError.
    static Image gray_from_rgb(std::size_t rows, std::size_t cols, std::span<const std::uint8_t> rgb);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    PixelDepth depth() const noexcept { return depth_; }
    unsigned bits() const noexcept { return static_cast<unsigned>(depth_); }
    std::size_t channels() const noexcept { return depth_ == PixelDepth::Color ? 3 : 1; }
    std::span<const std::uint8_t> samples() const noexcept { return samples_; }

    bool black(std::size_t row, std::size_t col) const { return samples_[row * cols_ + col] != 0; }
    std::uint8_t level(std::size_t row, std::size_t col) const { return samples_[row * cols_ + col]; }
    std::array<std::uint8_t, 3> rgb(std::size_t row, std::size_t col) const;

    friend bool operator==(const Image&, const Image&) = default;

private:
    Image(std::size_t rows, std::size_t cols, PixelDepth depth, std::vector<std::uint8_t> samples);

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    PixelDepth depth_ = PixelDepth::Gray;
    std::vector<std::uint8_t> samples_;
};

// Black -> 1 / white -> 0; gray level as is; colour packed as R*2^16 + G*2^8 + B.
// The result has modulus 2^bits of the image.
CellMatrix image_to_matrix(const Image& image);

// Inverse of image_to_matrix. Throws DomainError if any cell >= 2^depth.
Image matrix_to_image(const CellMatrix& matrix, PixelDepth depth);

// Raw portable anymap (P4 / P5 / P6, maxval 255). Throws FormatError with the
// byte offset of the first problem.
Image decode_pnm(std::span<const std::uint8_t> bytes);
// Emits the canonical header "P?\n<width> <height>\n[255\n]" followed by raw samples.
std::vector<std::uint8_t> encode_pnm(const Image& image);

Image read_pnm_file(const std::filesystem::path& path);
void write_pnm_file(const std::filesystem::path& path, const Image& image);

// Whole-file helpers shared by the share format and the CLI.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace cashare
