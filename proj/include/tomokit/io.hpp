#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tomokit/types.hpp"

namespace tomo {

/// Dense double matrix with the on-disk CTMAT layout: ASCII header line
/// "CTMAT 1 <rows> <cols>\n" followed by rows*cols little-endian doubles,
/// row-major.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
};

namespace detail {

static_assert(std::endian::native == std::endian::little,
              "CTMAT I/O assumes a little-endian host");

} // namespace detail

inline void write_matrix(const std::filesystem::path& path, const Matrix& mat) {
    if (mat.rows == 0 || mat.cols == 0 || mat.values.size() != mat.rows * mat.cols)
        throw invalid_argument("write_matrix: inconsistent dimensions");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out << "CTMAT 1 " << mat.rows << " " << mat.cols << "\n";
    out.write(reinterpret_cast<const char*>(mat.values.data()),
              static_cast<std::streamsize>(mat.values.size() * sizeof(double)));
    if (!out) throw io_error("write failed: " + path.string());
}

inline Matrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open for reading: " + path.string());
    std::string magic;
    int version = 0;
    std::size_t rows = 0, cols = 0;
    in >> magic >> version >> rows >> cols;
    if (!in || magic != "CTMAT" || version != 1 || rows == 0 || cols == 0)
        throw io_error("not a CTMAT v1 file: " + path.string());
    in.get(); // the newline terminating the header
    Matrix mat{rows, cols, std::vector<double>(rows * cols)};
    in.read(reinterpret_cast<char*>(mat.values.data()),
            static_cast<std::streamsize>(mat.values.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(mat.values.size() * sizeof(double)))
        throw io_error("truncated CTMAT payload: " + path.string());
    return mat;
}

inline void write_image(const std::filesystem::path& path, const Image& img) {
    write_matrix(path, Matrix{img.size_n, img.size_n, img.values});
}

inline Image read_image(const std::filesystem::path& path) {
    Matrix mat = read_matrix(path);
    if (mat.rows != mat.cols)
        throw io_error("expected a square image matrix: " + path.string());
    Image img(mat.rows);
    img.values = std::move(mat.values);
    return img;
}

inline void write_sinogram(const std::filesystem::path& path, const Sinogram& sino) {
    write_matrix(path, Matrix{sino.geometry.n_angles, sino.geometry.n_detectors, sino.values});
}

/// Masks travel as a 2n^2 x 1 matrix of 0.0/1.0 values.
inline void write_mask(const std::filesystem::path& path, const EdgeMask& mask) {
    Matrix mat{mask.bits.size(), 1, std::vector<double>(mask.bits.size())};
    for (std::size_t k = 0; k < mask.bits.size(); ++k)
        mat.values[k] = mask.bits[k] ? 1.0 : 0.0;
    write_matrix(path, mat);
}

/// 8-bit grayscale preview, [0,1] mapped linearly to [0,255] with clamping.
inline void write_pgm(const std::filesystem::path& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out << "P5\n" << img.size_n << " " << img.size_n << "\n255\n";
    std::vector<unsigned char> bytes(img.values.size());
    for (std::size_t k = 0; k < img.values.size(); ++k) {
        const long scaled = std::lround(img.values[k] * 255.0);
        bytes[k] = static_cast<unsigned char>(std::clamp(scaled, 0L, 255L));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("write failed: " + path.string());
}

} // namespace tomo
