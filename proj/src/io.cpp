#include "nlpc/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "nlpc/version.hpp"

namespace nlpc::io {

namespace {

static_assert(std::endian::native == std::endian::little, "binary output assumes a little-endian host");

template <class T>
void put(std::string& buf, T v) {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    buf.append(bytes, sizeof(T));
}

template <class T>
T get(const std::string& buf, std::size_t offset) {
    T v;
    std::memcpy(&v, buf.data() + offset, sizeof(T));
    return v;
}

std::string binary_header(std::uint32_t flags, Eigen::Index rows, Eigen::Index cols, const BinaryAxes& axes) {
    std::string buf("NLPCJSA1", 8);
    put(buf, kBinaryVersion);
    put(buf, flags);
    put(buf, static_cast<std::uint64_t>(rows));
    put(buf, static_cast<std::uint64_t>(cols));
    put(buf, axes.signal0);
    put(buf, axes.signal_step);
    put(buf, axes.idler0);
    put(buf, axes.idler_step);
    return buf;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string header_block(std::string_view command, std::string_view config_json) {
    std::string h = "# ";
    h += kToolName;
    h += ' ';
    h += kVersion;
    h += "\n# command: ";
    h += command;
    h += "\n# config: ";
    h += config_json;
    h += '\n';
    return h;
}

Table::Table(std::string header, std::vector<std::string> columns) : text_(std::move(header)), columns_(columns.size()) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (k) text_ += '\t';
        text_ += columns[k];
    }
    text_ += '\n';
}

Table& Table::add(double v) { return add(std::string_view(format_double(v))); }

Table& Table::add(long long v) { return add(std::string_view(std::to_string(v))); }

Table& Table::add(std::string_view v) {
    if (cell_ == columns_) throw std::logic_error("table row has too many cells");
    if (cell_) text_ += '\t';
    text_ += v;
    ++cell_;
    return *this;
}

void Table::end_row() {
    if (cell_ != columns_) throw std::logic_error("table row has too few cells");
    text_ += '\n';
    cell_ = 0;
}

void Table::save(const std::filesystem::path& path) const { write_file(path, text_); }

KeyValue::KeyValue(std::string header) : text_(std::move(header)) {}

KeyValue& KeyValue::set(std::string_view key, double v) { return set(key, std::string_view(format_double(v))); }

KeyValue& KeyValue::set(std::string_view key, long long v) { return set(key, std::string_view(std::to_string(v))); }

KeyValue& KeyValue::set(std::string_view key, bool v) { return set(key, std::string_view(v ? "true" : "false")); }

KeyValue& KeyValue::set(std::string_view key, std::string_view v) {
    text_ += key;
    text_ += ": ";
    text_ += v;
    text_ += '\n';
    return *this;
}

void KeyValue::save(const std::filesystem::path& path) const { write_file(path, text_); }

void write_binary_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& m, const BinaryAxes& axes) {
    std::string buf = binary_header(kBinaryComplex, m.rows(), m.cols(), axes);
    buf.reserve(buf.size() + static_cast<std::size_t>(m.size()) * 16);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            put(buf, m(r, c).real());
            put(buf, m(r, c).imag());
        }
    write_file(path, buf);
}

void write_binary_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m, const BinaryAxes& axes) {
    std::string buf = binary_header(0, m.rows(), m.cols(), axes);
    buf.reserve(buf.size() + static_cast<std::size_t>(m.size()) * 8);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) put(buf, m(r, c));
    write_file(path, buf);
}

BinaryMatrix read_binary_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 64 || buf.compare(0, 8, "NLPCJSA1") != 0)
        throw std::runtime_error(path.string() + " is not an NLPC matrix file");
    BinaryMatrix m;
    m.version = get<std::uint32_t>(buf, 8);
    m.flags = get<std::uint32_t>(buf, 12);
    const auto rows = get<std::uint64_t>(buf, 16);
    const auto cols = get<std::uint64_t>(buf, 24);
    m.axes = {get<double>(buf, 32), get<double>(buf, 40), get<double>(buf, 48), get<double>(buf, 56)};
    const bool cplx = (m.flags & kBinaryComplex) != 0;
    const std::size_t need = 64 + rows * cols * (cplx ? 16 : 8);
    if (buf.size() != need) throw std::runtime_error(path.string() + " has an inconsistent size");
    m.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::size_t off = 64;
    for (Eigen::Index r = 0; r < m.data.rows(); ++r)
        for (Eigen::Index c = 0; c < m.data.cols(); ++c) {
            const double re = get<double>(buf, off);
            off += 8;
            double im = 0.0;
            if (cplx) {
                im = get<double>(buf, off);
                off += 8;
            }
            m.data(r, c) = {re, im};
        }
    return m;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace nlpc::io
