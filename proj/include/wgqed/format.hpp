// format.hpp: Deterministic number formatting and small CSV helpers

#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/errors.hpp"

namespace wgqed::fmt {

// Shortest decimal that round-trips; "inf" / "-inf" / "nan" literals otherwise.
inline std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";  // folds -0 into 0
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::string num(std::size_t x) { return std::to_string(x); }
inline std::string num(int x) { return std::to_string(x); }

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

    template <class... Cells>
    CsvWriter& add(const Cells&... cells) {
        std::vector<std::string> r;
        r.reserve(sizeof...(cells));
        (r.push_back(cell(cells)), ...);
        return row(r);
    }

    CsvWriter& row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_) {
            throw Error(ErrorCode::DimensionMismatch, "CSV row width does not match the header");
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
        return *this;
    }

    const std::string& str() const noexcept { return text_; }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(std::string_view s) { return std::string(s); }
    static std::string cell(const char* s) { return s; }
    static std::string cell(double x) { return num(x); }
    static std::string cell(int x) { return num(x); }
    static std::string cell(std::size_t x) { return num(x); }

    std::size_t columns_;
    std::string text_;
};

// Row-major matrix with "re,im" cell pairs.
inline std::string matrix_csv(const Eigen::MatrixXcd& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += num(m(i, j).real());
            out += ',';
            out += num(m(i, j).imag());
        }
        out += '\n';
    }
    return out;
}

} // namespace wgqed::fmt
