#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lrc/geometry.hpp"

namespace lrc::io {

enum class MatrixFormat { Csv, Binary };

/// ".bin" selects the binary layout, anything else is treated as CSV.
MatrixFormat format_for_path(const std::filesystem::path& path);

/// Comma-separated, '.' decimal point, optional single header row. Every cell
/// must parse as a finite number; errors name the offending 1-based row and
/// column.
Matrix read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const Matrix& m,
               const std::vector<std::string>& header = {});

/// 8-byte header (n, d as little-endian uint32) followed by n * d
/// little-endian float64 values in row-major order.
Matrix read_binary(const std::filesystem::path& path);
void write_binary(const std::filesystem::path& path, const Matrix& m);

Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& m,
                  const std::vector<std::string>& header = {});

/// Shortest round-trip decimal representation, independent of locale.
std::string format_double(double value);

}  // namespace lrc::io
