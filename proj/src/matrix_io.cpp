#include "lrc/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string_view>

#include "lrc/error.hpp"

namespace lrc::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view cell) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
    return value;
}

std::string location(const std::filesystem::path& path, std::size_t row, std::size_t col) {
    return path.string() + ": row " + std::to_string(row) + ", column " + std::to_string(col);
}

}  // namespace

MatrixFormat format_for_path(const std::filesystem::path& path) {
    return path.extension() == ".bin" ? MatrixFormat::Binary : MatrixFormat::Csv;
}

Matrix read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path.string() + "' for reading");

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (trim(view).empty()) continue;
        const auto cells = split_commas(view);

        std::vector<double> values;
        values.reserve(cells.size());
        bool is_header = false;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto v = parse_number(cells[c]);
            if (!v) {
                // A first row made entirely of non-numeric labels is a header.
                if (header_allowed && c == 0) {
                    is_header = true;
                    for (const auto cell : cells) {
                        if (parse_number(cell)) is_header = false;
                    }
                    if (is_header) break;
                }
                throw FormatError(location(path, line_no, c + 1) + ": cannot parse '" +
                                  std::string(cells[c]) + "' as a number");
            }
            if (!std::isfinite(*v)) {
                throw FormatError(location(path, line_no, c + 1) + ": non-finite value '" +
                                  std::string(cells[c]) + "'");
            }
            values.push_back(*v);
        }
        if (is_header) {
            width = cells.size();
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        if (width == 0) width = values.size();
        if (values.size() != width) {
            throw FormatError(path.string() + ": row " + std::to_string(line_no) + " has " +
                              std::to_string(values.size()) + " columns, expected " +
                              std::to_string(width));
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw FormatError(path.string() + ": no data rows");

    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return {buf.data(), ptr};
}

void write_csv(const std::filesystem::path& path, const Matrix& m, const std::vector<std::string>& header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    if (!header.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
        out << '\n';
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << format_double(m(r, c));
        out << '\n';
    }
    if (!out) throw FormatError("write to '" + path.string() + "' failed");
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
    const std::array<char, 4> b{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                                static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    out.write(b.data(), 4);
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void write_binary(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const auto bits = std::bit_cast<std::uint64_t>(m(r, c));
            std::array<char, 8> b{};
            for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xFF);
            out.write(b.data(), 8);
        }
    }
    if (!out) throw FormatError("write to '" + path.string() + "' failed");
}

Matrix read_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "' for reading");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 8) throw FormatError(path.string() + ": truncated header");
    const std::uint64_t n = get_u32(bytes.data());
    const std::uint64_t d = get_u32(bytes.data() + 4);
    if (bytes.size() != 8 + n * d * 8) {
        throw FormatError(path.string() + ": header declares " + std::to_string(n) + " x " +
                          std::to_string(d) + " but payload has " + std::to_string(bytes.size() - 8) +
                          " bytes");
    }
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    const unsigned char* p = bytes.data() + 8;
    for (std::uint64_t r = 0; r < n; ++r) {
        for (std::uint64_t c = 0; c < d; ++c, p += 8) {
            std::uint64_t bits = 0;
            for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(p[k]) << (8 * k);
            const double v = std::bit_cast<double>(bits);
            if (!std::isfinite(v)) throw FormatError(location(path, r + 1, c + 1) + ": non-finite value");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return m;
}

Matrix read_matrix(const std::filesystem::path& path) {
    return format_for_path(path) == MatrixFormat::Binary ? read_binary(path) : read_csv(path);
}

void write_matrix(const std::filesystem::path& path, const Matrix& m, const std::vector<std::string>& header) {
    if (format_for_path(path) == MatrixFormat::Binary) {
        write_binary(path, m);
    } else {
        write_csv(path, m, header);
    }
}

}  // namespace lrc::io
