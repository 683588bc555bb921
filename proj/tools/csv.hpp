#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

#include <fmt/format.h>

#include "run_config.hpp"

namespace choquard::cli {

/// RFC 4180 writer: CRLF records, fields quoted when they hold a comma, quote or line break.
/// Doubles print in shortest round-trip form, so equal bits give equal bytes.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : path_(path), out_(path) {
        if (!out_) throw IoError("cannot open " + path.string() + " for writing");
        columns_ = header.size();
        write(header);
    }

    template <class... Ts>
    void row(const Ts&... fields) {
        static_assert(sizeof...(Ts) > 0);
        std::vector<std::string> cells{cell(fields)...};
        if (cells.size() != columns_) throw std::logic_error("csv row width mismatch in " + path_.string());
        write(cells);
    }

    void close() {
        out_.close();
        if (!out_) throw IoError("failed writing " + path_.string());
    }

private:
    template <class T>
    static std::string cell(const T& v) {
        if constexpr (std::is_same_v<T, bool>) return v ? "1" : "0";
        else if constexpr (std::is_convertible_v<T, std::string>) return std::string(v);
        else return fmt::format("{}", v);
    }

    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }

    void write(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << quote(cells[i]);
        out_ << "\r\n";
        if (!out_) throw IoError("failed writing " + path_.string());
    }

    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_ = 0;
};

}  // namespace choquard::cli
