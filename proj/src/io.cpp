#include "kinetic/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kinetic {

void write_snapshot(const std::string& path, const ScalarField& f) {
    std::ofstream bin(path, std::ios::binary);
    if (!bin) throw std::runtime_error("write_snapshot: cannot open " + path);
    bin.write(reinterpret_cast<const char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
    bin.close();

    nlohmann::json sidecar;
    sidecar["n"] = f.grid().n;
    sidecar["extent"] = f.grid().extent;
    sidecar["order"] = "row-major";
    sidecar["dtype"] = "f64";
    std::ofstream js(path + ".json");
    js << sidecar.dump(2) << "\n";
}

ScalarField read_snapshot(const std::string& path) {
    std::ifstream js(path + ".json");
    if (!js) throw std::runtime_error("read_snapshot: missing sidecar " + path + ".json");
    nlohmann::json sidecar = nlohmann::json::parse(js);
    if (sidecar.at("dtype").get<std::string>() != "f64")
        throw std::runtime_error("read_snapshot: unsupported dtype");
    GridSpec g(sidecar.at("n").get<int>(), sidecar.at("extent").get<double>());
    ScalarField f(g);
    std::ifstream bin(path, std::ios::binary);
    if (!bin) throw std::runtime_error("read_snapshot: cannot open " + path);
    bin.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (static_cast<std::size_t>(bin.gcount()) != f.size() * sizeof(double))
        throw std::runtime_error("read_snapshot: truncated payload in " + path);
    return f;
}

void CsvTable::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("CsvTable::write: cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    char buf[32];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
}

void write_svg_lines(const std::string& path, const std::string& title,
                     const std::vector<double>& x, const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels, bool logx, bool logy) {
    const int W = 640, H = 420, ML = 60, MR = 20, MT = 40, MB = 45;
    auto tx = [&](double v) { return logx ? std::log10(std::max(v, 1e-300)) : v; };
    auto ty = [&](double v) { return logy ? std::log10(std::max(std::abs(v), 1e-300)) : v; };
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (double v : x) {
        xmin = std::min(xmin, tx(v));
        xmax = std::max(xmax, tx(v));
    }
    for (const auto& s : series)
        for (double v : s) {
            ymin = std::min(ymin, ty(v));
            ymax = std::max(ymax, ty(v));
        }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    auto px = [&](double v) { return ML + (tx(v) - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double v) { return H - MB - (ty(v) - ymin) / (ymax - ymin) * (H - MT - MB); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
    svg << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        svg << "<polyline fill=\"none\" stroke=\"" << colors[s % 6] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < x.size() && i < series[s].size(); ++i)
            svg << px(x[i]) << "," << py(series[s][i]) << " ";
        svg << "\"/>\n";
        if (s < labels.size())
            svg << "<text x=\"" << W - MR - 150 << "\" y=\"" << MT + 16 * (s + 1) << "\" font-size=\"12\" fill=\""
                << colors[s % 6] << "\">" << labels[s] << "</text>\n";
    }
    char lab[64];
    std::snprintf(lab, sizeof(lab), "%s[%.3g, %.3g]", logx ? "log10 " : "", xmin, xmax);
    svg << "<text x=\"" << (W + ML - MR) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">" << lab << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%s[%.3g, %.3g]", logy ? "log10 " : "", ymin, ymax);
    svg << "<text x=\"14\" y=\"" << (H + MT - MB) / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << (H + MT - MB) / 2 << ")\">" << lab << "</text>\n";
    svg << "</svg>\n";

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_svg_lines: cannot open " + path);
    out << svg.str();
}

} // namespace kinetic
