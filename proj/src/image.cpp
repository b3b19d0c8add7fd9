#include "cashare/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "cashare/errors.hpp"

namespace cashare {

PixelDepth pixel_depth_from_bits(unsigned bits) {
    switch (bits) {
        case 1: return PixelDepth::Bilevel;
        case 8: return PixelDepth::Gray;
        case 24: return PixelDepth::Color;
        default: throw DomainError("unsupported pixel depth " + std::to_string(bits) + " (expected 1, 8 or 24)");
    }
}

Image::Image(std::size_t rows, std::size_t cols, PixelDepth depth, std::vector<std::uint8_t> samples)
    : rows_(rows), cols_(cols), depth_(depth), samples_(std::move(samples)) {
    if (rows_ == 0 || cols_ == 0) {
        throw ShapeError("image must have at least one pixel");
    }
    if (samples_.size() != rows_ * cols_ * channels()) {
        throw ShapeError("expected " + std::to_string(rows_ * cols_ * channels()) + " samples, got " +
                         std::to_string(samples_.size()));
    }
}

Image Image::bilevel(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> black) {
    for (auto& b : black) b = b ? 1 : 0;
    return Image(rows, cols, PixelDepth::Bilevel, std::move(black));
}

Image Image::gray(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> levels) {
    return Image(rows, cols, PixelDepth::Gray, std::move(levels));
}

Image Image::color(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> rgb) {
    return Image(rows, cols, PixelDepth::Color, std::move(rgb));
}

Image Image::gray_from_rgb(std::size_t rows, std::size_t cols, std::span<const std::uint8_t> rgb) {
    if (rgb.size() != rows * cols * 3) {
        throw ShapeError("RGB buffer size does not match image dimensions");
    }
    std::vector<std::uint8_t> levels(rows * cols);
    for (std::size_t p = 0; p < levels.size(); ++p) {
        const auto r = rgb[3 * p], g = rgb[3 * p + 1], b = rgb[3 * p + 2];
        if (r != g || g != b) {
            throw FormatError("pixel " + std::to_string(p) + " is not gray (R, G, B differ)", 3 * p);
        }
        levels[p] = r;
    }
    return Image(rows, cols, PixelDepth::Gray, std::move(levels));
}

std::array<std::uint8_t, 3> Image::rgb(std::size_t row, std::size_t col) const {
    if (depth_ != PixelDepth::Color) {
        const std::uint8_t v = depth_ == PixelDepth::Gray ? level(row, col) : (black(row, col) ? 0 : 255);
        return {v, v, v};
    }
    const auto* p = &samples_[(row * cols_ + col) * 3];
    return {p[0], p[1], p[2]};
}

CellMatrix image_to_matrix(const Image& image) {
    const auto samples = image.samples();
    std::vector<std::uint32_t> cells(image.rows() * image.cols());
    if (image.depth() == PixelDepth::Color) {
        for (std::size_t p = 0; p < cells.size(); ++p) {
            cells[p] = (std::uint32_t{samples[3 * p]} << 16) | (std::uint32_t{samples[3 * p + 1]} << 8) |
                       std::uint32_t{samples[3 * p + 2]};
        }
    } else {
        for (std::size_t p = 0; p < cells.size(); ++p) cells[p] = samples[p];
    }
    return CellMatrix(image.rows(), image.cols(), image.bits(), std::move(cells));
}

Image matrix_to_image(const CellMatrix& matrix, PixelDepth depth) {
    const auto bits = static_cast<unsigned>(depth);
    const std::uint32_t limit = (std::uint32_t{1} << bits) - 1;
    const auto cells = matrix.cells();
    for (std::size_t p = 0; p < cells.size(); ++p) {
        if (cells[p] > limit) {
            throw DomainError("cell " + std::to_string(p) + " value " + std::to_string(cells[p]) +
                              " does not fit a " + std::to_string(bits) + "-bit pixel");
        }
    }
    if (depth == PixelDepth::Color) {
        std::vector<std::uint8_t> rgb(cells.size() * 3);
        for (std::size_t p = 0; p < cells.size(); ++p) {
            rgb[3 * p] = static_cast<std::uint8_t>(cells[p] >> 16);
            rgb[3 * p + 1] = static_cast<std::uint8_t>(cells[p] >> 8);
            rgb[3 * p + 2] = static_cast<std::uint8_t>(cells[p]);
        }
        return Image::color(matrix.rows(), matrix.cols(), std::move(rgb));
    }
    std::vector<std::uint8_t> samples(cells.begin(), cells.end());
    return depth == PixelDepth::Gray ? Image::gray(matrix.rows(), matrix.cols(), std::move(samples))
                                     : Image::bilevel(matrix.rows(), matrix.cols(), std::move(samples));
}

// ---------------------------------------------------------------------------
// PNM

namespace {

class HeaderReader {
public:
    HeaderReader(std::span<const std::uint8_t> bytes, std::size_t start) : bytes_(bytes), pos_(start) {}

    std::size_t offset() const noexcept { return pos_; }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t read_number(const char* what) {
        skip_space_and_comments();
        const auto start = pos_;
        std::size_t value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > (std::size_t{1} << 31)) {
                throw FormatError(std::string("PNM ") + what + " is too large", start);
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw FormatError(std::string("PNM header: expected ") + what, start);
        }
        return value;
    }

    // Exactly one whitespace byte separates the header from the raster.
    void end_of_header() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw FormatError("PNM header must end with a single whitespace byte", pos_);
        }
        ++pos_;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

Image decode_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') {
        throw FormatError("not a portable anymap (missing 'P' magic)", 0);
    }
    const char kind = static_cast<char>(bytes[1]);
    if (kind != '4' && kind != '5' && kind != '6') {
        throw FormatError(std::string("unsupported PNM variant P") + kind + " (only raw P4, P5, P6)", 1);
    }
    if (bytes.size() < 3 || !std::isspace(bytes[2])) {
        throw FormatError("PNM magic must be followed by whitespace", 2);
    }
    HeaderReader header(bytes, 2);
    const auto width = header.read_number("width");
    const auto height = header.read_number("height");
    if (width == 0 || height == 0) {
        throw FormatError("PNM image has zero width or height", header.offset());
    }
    if (kind != '4') {
        const auto maxval_at = header.offset();
        const auto maxval = header.read_number("maxval");
        if (maxval != 255) {
            throw FormatError("unsupported maxval " + std::to_string(maxval) + " (only 255)", maxval_at);
        }
    }
    header.end_of_header();

    const auto start = header.offset();
    const std::size_t row_bytes = kind == '4' ? (width + 7) / 8 : width * (kind == '6' ? 3 : 1);
    const std::size_t needed = row_bytes * height;
    if (bytes.size() - start < needed) {
        throw FormatError("truncated raster: need " + std::to_string(needed) + " bytes, have " +
                              std::to_string(bytes.size() - start),
                          bytes.size());
    }
    const auto raster = bytes.subspan(start, needed);

    switch (kind) {
        case '4': {
            std::vector<std::uint8_t> black(width * height);
            for (std::size_t i = 0; i < height; ++i) {
                for (std::size_t j = 0; j < width; ++j) {
                    black[i * width + j] = (raster[i * row_bytes + j / 8] >> (7 - j % 8)) & 1U;
                }
            }
            return Image::bilevel(height, width, std::move(black));
        }
        case '5':
            return Image::gray(height, width, std::vector<std::uint8_t>(raster.begin(), raster.end()));
        default:
            return Image::color(height, width, std::vector<std::uint8_t>(raster.begin(), raster.end()));
    }
}

std::vector<std::uint8_t> encode_pnm(const Image& image) {
    std::string header;
    switch (image.depth()) {
        case PixelDepth::Bilevel: header = "P4\n"; break;
        case PixelDepth::Gray: header = "P5\n"; break;
        case PixelDepth::Color: header = "P6\n"; break;
    }
    header += std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n";
    if (image.depth() != PixelDepth::Bilevel) {
        header += "255\n";
    }
    std::vector<std::uint8_t> out(header.begin(), header.end());

    if (image.depth() == PixelDepth::Bilevel) {
        const std::size_t row_bytes = (image.cols() + 7) / 8;
        const auto base = out.size();
        out.resize(base + row_bytes * image.rows(), 0);
        for (std::size_t i = 0; i < image.rows(); ++i) {
            for (std::size_t j = 0; j < image.cols(); ++j) {
                if (image.black(i, j)) {
                    out[base + i * row_bytes + j / 8] |= static_cast<std::uint8_t>(0x80U >> (j % 8));
                }
            }
        }
    } else {
        const auto samples = image.samples();
        out.insert(out.end(), samples.begin(), samples.end());
    }
    return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("write failed for " + path.string());
    }
}

Image read_pnm_file(const std::filesystem::path& path) { return decode_pnm(read_file_bytes(path)); }

void write_pnm_file(const std::filesystem::path& path, const Image& image) {
    write_file_bytes(path, encode_pnm(image));
}

}  // namespace cashare
