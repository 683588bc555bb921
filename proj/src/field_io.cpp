#include "choquard/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace choquard {

namespace {

void put_le(std::ostream& os, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
    os.write(bytes, 8);
}

double get_le(const unsigned char* bytes) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | bytes[b];
    return std::bit_cast<double>(bits);
}

}  // namespace

std::string field_header(const GridSpec& grid) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "CHQ1 n=%d L=%.17g order=row-major endian=little dtype=f64",
                  grid.n(), grid.half_length());
    return buf;
}

void write_field(std::ostream& os, const ScalarField& u) {
    os << field_header(u.grid()) << '\n';
    for (double v : u.values()) put_le(os, v);
    if (!os) throw std::runtime_error("failed writing field dump");
}

ScalarField read_field(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("field dump: missing header");
    std::istringstream hs(header);
    std::string magic, ntok, ltok, order, endian, dtype;
    hs >> magic >> ntok >> ltok >> order >> endian >> dtype;
    if (magic != "CHQ1" || ntok.rfind("n=", 0) != 0 || ltok.rfind("L=", 0) != 0 ||
        order != "order=row-major" || endian != "endian=little" || dtype != "dtype=f64")
        throw std::runtime_error("field dump: malformed header '" + header + "'");
    const int n = std::stoi(ntok.substr(2));
    const double L = std::stod(ltok.substr(2));
    GridSpec grid = make_grid(n, L);
    std::vector<unsigned char> raw(grid.size() * 8);
    is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (is.gcount() != static_cast<std::streamsize>(raw.size()))
        throw std::runtime_error("field dump: truncated payload");
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = get_le(&raw[8 * i]);
    return ScalarField(grid, std::move(values));
}

void write_field(const std::filesystem::path& path, const ScalarField& u) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_field(os, u);
}

ScalarField read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_field(is);
}

}  // namespace choquard
