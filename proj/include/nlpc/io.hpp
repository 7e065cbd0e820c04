#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace nlpc::io {

/// Shortest text that reads back to the same double ("%.17g" style).
std::string format_double(double v);

/// `#`-prefixed header lines: tool version, command, resolved configuration.
std::string header_block(std::string_view command, std::string_view config_json);

/// Tab-separated table with a `#` header block and one column-name line.
class Table {
public:
    Table(std::string header, std::vector<std::string> columns);

    Table& add(double v);
    Table& add(long long v);
    Table& add(int v) { return add(static_cast<long long>(v)); }
    Table& add(std::string_view v);
    Table& add(const char* v) { return add(std::string_view(v)); }
    Table& add(bool v) { return add(static_cast<long long>(v ? 1 : 0)); }
    void end_row();

    const std::string& text() const { return text_; }
    void save(const std::filesystem::path& path) const;

private:
    std::string text_;
    std::size_t columns_ = 0;
    std::size_t cell_ = 0;
};

/// `key: value` lines under a `#` header block.
class KeyValue {
public:
    explicit KeyValue(std::string header);

    KeyValue& set(std::string_view key, double v);
    KeyValue& set(std::string_view key, long long v);
    KeyValue& set(std::string_view key, int v) { return set(key, static_cast<long long>(v)); }
    KeyValue& set(std::string_view key, bool v);
    KeyValue& set(std::string_view key, std::string_view v);
    KeyValue& set(std::string_view key, const char* v) { return set(key, std::string_view(v)); }

    const std::string& text() const { return text_; }
    void save(const std::filesystem::path& path) const;

private:
    std::string text_;
};

/// Binary matrix file: 64-byte little-endian header followed by row-major
/// doubles (real, or interleaved real/imaginary when flags bit 0 is set).
///   0  char[8] magic "NLPCJSA1"
///   8  u32     format version (1)
///  12  u32     flags
///  16  u64     rows (signal)
///  24  u64     cols (idler)
///  32  f64     omega_s[0]
///  40  f64     d omega_s
///  48  f64     omega_i[0]
///  56  f64     d omega_i
struct BinaryAxes {
    double signal0 = 0.0;
    double signal_step = 0.0;
    double idler0 = 0.0;
    double idler_step = 0.0;
};

inline constexpr std::uint32_t kBinaryVersion = 1;
inline constexpr std::uint32_t kBinaryComplex = 1;

void write_binary_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& m, const BinaryAxes& axes);
void write_binary_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m, const BinaryAxes& axes);

struct BinaryMatrix {
    std::uint32_t version = 0;
    std::uint32_t flags = 0;
    BinaryAxes axes;
    Eigen::MatrixXcd data;  // imaginary part zero for real files
};

BinaryMatrix read_binary_matrix(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace nlpc::io
