#pragma once

#include "kinetic/grid.hpp"

#include <string>
#include <vector>

namespace kinetic {

// Field snapshot: little-endian f64 flat array in x-fastest order plus a JSON
// sidecar {n, extent, order, dtype} at <path>.json.
void write_snapshot(const std::string& path, const ScalarField& f);
ScalarField read_snapshot(const std::string& path);

// Minimal CSV writer: one header row, then rows of doubles.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    void write(const std::string& path) const;
};

// Line plot of (x, series...) written as a standalone SVG.
void write_svg_lines(const std::string& path, const std::string& title,
                     const std::vector<double>& x, const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels, bool logx = false, bool logy = false);

} // namespace kinetic
