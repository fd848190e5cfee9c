#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "lrc/error.hpp"
#include "lrc/matrix_io.hpp"
#include "lrc/rank_correlation.hpp"
#include "lrc/reducers.hpp"

using namespace lrc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("lrc_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path file(const std::string& name) const { return path / name; }
};

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string error_of(const fs::path& p) {
    try {
        io::read_matrix(p);
    } catch (const FormatError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("CSV and binary writes round-trip bit-exactly") {
    TempDir dir;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 1e3);
    Matrix m(17, 4);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = g(rng) * std::pow(10.0, static_cast<double>(j) * 5 - 8);
    }
    io::write_matrix(dir.file("m.csv"), m, {"a", "b", "c", "d"});
    io::write_matrix(dir.file("m.bin"), m);
    CHECK(io::read_matrix(dir.file("m.csv")) == m);
    CHECK(io::read_matrix(dir.file("m.bin")) == m);
}

TEST_CASE("binary layout is a little-endian (n, d) header followed by row-major doubles") {
    TempDir dir;
    Matrix m(2, 3);
    m << 1, 2, 3, 4, 5, 6;
    io::write_binary(dir.file("m.bin"), m);
    std::ifstream in(dir.file("m.bin"), std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    REQUIRE(bytes.size() == 8 + 6 * 8);
    CHECK(bytes[0] == 2);
    CHECK(bytes[1] == 0);
    CHECK(bytes[4] == 3);
    // 2.0 is 0x4000000000000000: second value, last byte.
    CHECK(bytes[8 + 8 + 7] == 0x40);
    CHECK(bytes[8 + 8 + 6] == 0x00);
}

TEST_CASE("CSV parsing accepts a header, whitespace and CRLF") {
    TempDir dir;
    write_text(dir.file("h.csv"), "x, y\r\n1.5, -2\r\n3e2,+4\r\n\r\n");
    const Matrix m = io::read_csv(dir.file("h.csv"));
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 2);
    CHECK(m(0, 0) == 1.5);
    CHECK(m(0, 1) == -2.0);
    CHECK(m(1, 0) == 300.0);
    CHECK(m(1, 1) == 4.0);
}

TEST_CASE("CSV errors name the offending cell") {
    TempDir dir;
    write_text(dir.file("nan.csv"), "1,2\n3,4\n5,nan\n");
    CHECK(error_of(dir.file("nan.csv")).find("row 3, column 2") != std::string::npos);
    write_text(dir.file("text.csv"), "1,2\n3,abc\n");
    CHECK(error_of(dir.file("text.csv")).find("row 2, column 2") != std::string::npos);
    write_text(dir.file("late_header.csv"), "1,2\nx,y\n");
    CHECK(error_of(dir.file("late_header.csv")).find("row 2, column 1") != std::string::npos);
    write_text(dir.file("ragged.csv"), "1,2\n3\n");
    CHECK(error_of(dir.file("ragged.csv")).find("row 2") != std::string::npos);
    write_text(dir.file("empty.csv"), "a,b\n");
    CHECK_FALSE(error_of(dir.file("empty.csv")).empty());
    CHECK_FALSE(error_of(dir.file("missing.csv")).empty());
}

TEST_CASE("binary errors are reported") {
    TempDir dir;
    write_text(dir.file("short.bin"), std::string("\x02\x00\x00\x00\x01\x00\x00\x00", 8));
    CHECK(error_of(dir.file("short.bin")).find("payload") != std::string::npos);
    Matrix m(1, 1);
    m(0, 0) = std::numeric_limits<double>::infinity();
    io::write_binary(dir.file("inf.bin"), m);
    CHECK(error_of(dir.file("inf.bin")).find("row 1, column 1") != std::string::npos);
}

TEST_CASE("an imported identity embedding scores 1 against its input") {
    TempDir dir;
    Matrix x(5, 3);
    x << 0, 0, 0, 1, 0.1, 0, 0.3, 2, 0.7, 4, 1, 1, 2.5, -1, 3;
    io::write_csv(dir.file("x.csv"), x);
    const auto emb = import_embedding(dir.file("x.csv"), 5);
    CHECK(emb.config.method == Method::External);
    const auto r = evaluate(DataMatrix(x), emb.data, 2);
    for (Measure m : kAllMeasures) CHECK(r.value(m) == 1.0);
    CHECK_THROWS_AS(import_embedding(dir.file("x.csv"), 6), FormatError);
}
