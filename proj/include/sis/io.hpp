#pragma once

#include "sis/types.hpp"

#include <filesystem>

namespace sis::io {

/// NMAT binary matrix file: magic "NMAT", version u32 = 1, rows u64,
/// cols u64, then rows*cols little-endian IEEE-754 doubles, row-major.
/// Empty matrices (0 rows or 0 cols) are rejected on both paths.
void nmat_write(const std::filesystem::path& path, const Matrix& A);
Matrix nmat_read(const std::filesystem::path& path);

/// CSV matrix: header line "rows,cols", then one comma-separated data row
/// per matrix row. Intended for hand-authored fixtures.
void csv_write_matrix(const std::filesystem::path& path, const Matrix& A);
Matrix csv_read_matrix(const std::filesystem::path& path);

/// Reads a matrix by extension: .nmat binary, .csv text.
Matrix read_matrix(const std::filesystem::path& path);

/// Source positions: one "x,y,z" line per source (mm), with header.
void write_positions(const std::filesystem::path& path,
                     const std::vector<Point3>& positions);
std::vector<Point3> read_positions(const std::filesystem::path& path);

} // namespace sis::io
