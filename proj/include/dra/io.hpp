#pragma once

// Text formats shared by the command-line tool and the plotting scripts.
//
//   points   "# <meta>" line, then "x,y", one point per row
//   hilbert  "# <meta>" line, then "s,k,h0,h1", s-major over the grid
//   curves   "s,ell,phi" with ell in 0, 1, ..., inf; rows sorted by (ell, s)
//
// Floating-point values use 17 significant digits.

#include "dra/degree_rips.hpp"
#include "dra/errors.hpp"
#include "dra/homotopy_curves.hpp"
#include "dra/sampler.hpp"

#include <fmt/format.h>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace dra {

inline constexpr std::string_view version = "0.1.0";

inline std::string format_double(double v) { return fmt::format("{:.17g}", v); }

/// Writes `content` to a temporary file next to `path`, then renames it over
/// `path`, so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

inline std::string points_csv(const std::vector<Point2>& points, std::string_view meta) {
    std::string out = fmt::format("# {}\nx,y\n", meta);
    for (const auto& p : points) {
        out += format_double(p.x);
        out += ',';
        out += format_double(p.y);
        out += '\n';
    }
    return out;
}

struct PointsFile {
    std::vector<Point2> points;
    /// Text of the leading "#" comment lines, without the "# " prefix.
    std::vector<std::string> comments;
};

namespace io_detail {

inline double parse_number(std::string_view text, std::size_t line_no, const char* column) {
    std::string buf(text);
    const auto first = buf.find_first_not_of(" \t");
    const auto last = buf.find_last_not_of(" \t\r");
    if (first == std::string::npos) {
        throw ParseError(fmt::format("line {}: empty {} value", line_no, column));
    }
    buf = buf.substr(first, last - first + 1);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ParseError(fmt::format("line {}: bad {} value '{}'", line_no, column, buf));
    }
    return v;
}

} // namespace io_detail

/// Parses a points CSV. Leading "#" lines are kept as comments; the first
/// other line must be the "x,y" header.
inline PointsFile parse_points_csv(std::istream& in) {
    PointsFile file;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!header_seen) {
            if (!line.empty() && line.front() == '#') {
                std::string_view body(line);
                body.remove_prefix(1);
                if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
                file.comments.emplace_back(body);
                continue;
            }
            if (line != "x,y") {
                throw ParseError(fmt::format("line {}: expected header 'x,y', got '{}'", line_no, line));
            }
            header_seen = true;
            continue;
        }
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw ParseError(fmt::format("line {}: expected two comma-separated values", line_no));
        }
        const std::string_view view(line);
        file.points.push_back({io_detail::parse_number(view.substr(0, comma), line_no, "x"),
                               io_detail::parse_number(view.substr(comma + 1), line_no, "y")});
    }
    if (!header_seen) throw ParseError("missing 'x,y' header");
    if (file.points.empty()) throw ParseError("points file has no rows");
    return file;
}

inline PointsFile read_points_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open points file " + path.string());
    try {
        return parse_points_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

inline std::string hilbert_csv(const HilbertGrid& grid, std::string_view meta) {
    std::string out = fmt::format("# {}\ns,k,h0,h1\n", meta);
    for (std::size_t si = 0; si < grid.s_values.size(); ++si) {
        for (std::size_t kj = 0; kj < grid.k_values.size(); ++kj) {
            const std::size_t cell = grid.at(si, kj);
            out += fmt::format("{},{},{},{}\n", format_double(grid.s_values[si]),
                               format_double(grid.k_values[kj]), grid.h0[cell], grid.h1[cell]);
        }
    }
    return out;
}

inline std::string curves_csv(const CurveTable& table) {
    std::string out = "s,ell,phi\n";
    for (std::size_t i = 0; i < table.ells.size(); ++i) {
        const std::string ell = table.ells[i].str();
        for (std::size_t j = 0; j < table.s_grid.size(); ++j) {
            out += fmt::format("{},{},{}\n", format_double(table.s_grid[j]), ell,
                               format_double(table.values[i][j]));
        }
    }
    return out;
}

} // namespace dra
