#include "sis/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "NMAT writer assumes a little-endian host");

namespace sis::io {

namespace {

struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void fail(const std::filesystem::path& path, const std::string& what) {
    throw FileError(path.string() + ": " + what);
}

} // namespace

void nmat_write(const std::filesystem::path& path, const Matrix& A) {
    if (A.rows() == 0 || A.cols() == 0)
        throw DimensionError("nmat_write: empty matrix");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    const std::uint32_t version = 1;
    const std::uint64_t rows = static_cast<std::uint64_t>(A.rows());
    const std::uint64_t cols = static_cast<std::uint64_t>(A.cols());
    out.write("NMAT", 4);
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            const double v = A(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof v);
        }
    if (!out) fail(path, "write failed");
}

Matrix nmat_read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t rows = 0, cols = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&rows), sizeof rows);
    in.read(reinterpret_cast<char*>(&cols), sizeof cols);
    if (!in || std::memcmp(magic, "NMAT", 4) != 0)
        fail(path, "not an NMAT file");
    if (version != 1) fail(path, "unsupported NMAT version");
    if (rows == 0 || cols == 0) fail(path, "empty matrix");
    Matrix A(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::uint64_t i = 0; i < rows; ++i)
        for (std::uint64_t j = 0; j < cols; ++j) {
            double v;
            in.read(reinterpret_cast<char*>(&v), sizeof v);
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    if (!in) fail(path, "truncated NMAT file");
    return A;
}

void csv_write_matrix(const std::filesystem::path& path, const Matrix& A) {
    if (A.rows() == 0 || A.cols() == 0)
        throw DimensionError("csv_write_matrix: empty matrix");
    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    out.precision(17);
    out << A.rows() << "," << A.cols() << "\n";
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out << (j ? "," : "") << A(i, j);
        out << "\n";
    }
}

Matrix csv_read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open");
    std::string line;
    if (!std::getline(in, line)) fail(path, "missing header");
    Eigen::Index rows = 0, cols = 0;
    char comma = 0;
    std::istringstream header(line);
    if (!(header >> rows >> comma >> cols) || comma != ',' || rows < 1 || cols < 1)
        fail(path, "bad header, expected rows,cols");
    Matrix A(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) fail(path, "missing data row");
        std::istringstream row(line);
        std::string cell;
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (!std::getline(row, cell, ',')) fail(path, "short data row");
            A(i, j) = std::stod(cell);
        }
    }
    return A;
}

Matrix read_matrix(const std::filesystem::path& path) {
    if (path.extension() == ".csv") return csv_read_matrix(path);
    return nmat_read(path);
}

void write_positions(const std::filesystem::path& path,
                     const std::vector<Point3>& positions) {
    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    out.precision(17);
    out << "x_mm,y_mm,z_mm\n";
    for (const auto& p : positions)
        out << p.x() << "," << p.y() << "," << p.z() << "\n";
}

std::vector<Point3> read_positions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open");
    std::string line;
    if (!std::getline(in, line)) fail(path, "missing header");
    std::vector<Point3> positions;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        Point3 p;
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(row, cell, ',')) fail(path, "short position row");
            p[k] = std::stod(cell);
        }
        positions.push_back(p);
    }
    return positions;
}

} // namespace sis::io
