#pragma once

// Internal helpers for byte-deterministic delimited output.

#include "retailsim/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>

namespace retailsim::detail {

// Shortest representation that round-trips the exact double value.
inline std::string fmt_double(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_)
            throw IoError("cannot write file: " + path);
    }

    void cell(const std::string& s) { sep(); row_has_cells_ = true; out_ << csv_quote(s); }
    void cell(const char* s) { cell(std::string(s)); }
    void cell(double v) { sep(); row_has_cells_ = true; out_ << fmt_double(v); }
    void cell(long v) { sep(); row_has_cells_ = true; out_ << v; }
    void cell(long long v) { sep(); row_has_cells_ = true; out_ << v; }
    void cell(int v) { sep(); row_has_cells_ = true; out_ << v; }
    void cell(std::uint64_t v) { sep(); row_has_cells_ = true; out_ << v; }
    void empty_cell() { sep(); row_has_cells_ = true; }

    template <typename... Ts> void row(const Ts&... vs) {
        (cell(vs), ...);
        end_row();
    }

    void end_row() {
        out_ << '\n';
        row_has_cells_ = false;
    }

    void close() {
        out_.close();
        if (out_.fail())
            throw IoError("failed while writing file: " + path_);
    }

private:
    void sep() {
        if (row_has_cells_)
            out_ << ',';
    }

    std::string path_;
    std::ofstream out_;
    bool row_has_cells_ = false;
};

} // namespace retailsim::detail
