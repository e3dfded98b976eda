#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tailorder/empirical.hpp"
#include "tailorder/error.hpp"
#include "tailorder/order_analysis.hpp"

namespace tailorder::csv {

/// Full-precision decimal text (17 significant digits); infinities as
/// "inf"/"-inf".
inline std::string format(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        std::string_view cell = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t' || cell.front() == '"')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r' || cell.back() == '"'))
            cell.remove_suffix(1);
        out.emplace_back(cell);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

/// Parses a finite or infinite decimal number occupying the whole cell.
inline std::optional<double> parse_number(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    if (cell == "inf" || cell == "+inf") return INFINITY;
    if (cell == "-inf") return -INFINITY;
    const char* b = cell.data();
    const char* e = b + cell.size();
    if (*b == '+') ++b;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e) return std::nullopt;
    return v;
}

struct ColumnData {
    std::vector<double> values;
    std::size_t dropped = 0;
    std::string header;
};

/// Reads one numeric column, selected by header name or, failing that, by a
/// 0-based index. The first row is a header when the column is chosen by
/// name or when its selected cell is not numeric. Non-numeric and
/// non-finite rows are dropped and counted.
inline ColumnData read_column(const std::string& path, const std::string& column, char delim = ',') {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CSV file " + path);
    std::string line;
    ColumnData out;
    std::optional<std::size_t> col;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split(line, delim);
        if (first) {
            first = false;
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (cells[i] == column) col = i;
            if (col) {
                out.header = column;
                continue;
            }
            std::size_t idx = 0;
            auto [ptr, ec] = std::from_chars(column.data(), column.data() + column.size(), idx);
            if (column.empty() || ec != std::errc{} || ptr != column.data() + column.size())
                throw ParseError(path + ": no column named \"" + column + "\"");
            col = idx;
            if (idx >= cells.size()) throw ParseError(path + ": column index " + column + " out of range");
            if (!parse_number(cells[idx])) {
                out.header = cells[idx];
                continue;
            }
        }
        if (*col >= cells.size()) {
            ++out.dropped;
            continue;
        }
        auto v = parse_number(cells[*col]);
        if (!v || !std::isfinite(*v)) {
            ++out.dropped;
            continue;
        }
        out.values.push_back(*v);
    }
    if (first) throw ParseError(path + ": empty file");
    return out;
}

/// Writes the H_t(p) grid with header t,p,h, row-major over t then p.
inline void write_grid(const HGrid& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "t,p,h\n";
    for (std::size_t i = 0; i < g.t.size(); ++i)
        for (std::size_t j = 0; j < g.p.size(); ++j)
            out << format(g.t[i]) << ',' << format(g.p[j]) << ',' << format(g.at(i, j)) << '\n';
    if (!out) throw ParseError("error writing " + path);
}

/// Reads a grid written by write_grid back into matrix form.
inline HGrid read_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || split(line, ',') != std::vector<std::string>{"t", "p", "h"})
        throw ParseError(path + ": expected header t,p,h");
    HGrid g;
    std::vector<double> ts, ps;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto c = split(line, ',');
        if (c.size() != 3) throw ParseError(path + ": malformed row");
        auto t = parse_number(c[0]), p = parse_number(c[1]), h = parse_number(c[2]);
        if (!t || !p || !h) throw ParseError(path + ": non-numeric cell");
        if (g.t.empty() || g.t.back() != *t) g.t.push_back(*t);
        if (g.t.size() == 1) g.p.push_back(*p);
        g.h.push_back(*h);
    }
    if (g.h.size() != g.t.size() * g.p.size()) throw ParseError(path + ": grid is not rectangular");
    return g;
}

/// Writes P-P plot points with header t,sf_x,sf_y.
inline void write_pp(const PpPlot& plot, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "t,sf_x,sf_y\n";
    for (const auto& pt : plot.points) out << format(pt.t) << ',' << format(pt.sf_x) << ',' << format(pt.sf_y) << '\n';
    if (!out) throw ParseError("error writing " + path);
}

} // namespace tailorder::csv
