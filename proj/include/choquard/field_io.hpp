#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "choquard/grid.hpp"

namespace choquard {

/// "CHQ1 n=<n> L=<L> order=row-major endian=little dtype=f64\n" then n^3 little-endian doubles.
std::string field_header(const GridSpec& grid);

void write_field(std::ostream& os, const ScalarField& u);
ScalarField read_field(std::istream& is);

void write_field(const std::filesystem::path& path, const ScalarField& u);
ScalarField read_field(const std::filesystem::path& path);

}  // namespace choquard
