#include "krylab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "krylab/error.hpp"

namespace krylab {

namespace {
std::string quote_if_needed(const std::string& f) {
    if (f.find_first_of(",\"\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}
} // namespace

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) fail(ErrKind::invalid_argument, "CSV row width mismatch");
    rows_.push_back(std::move(row));
}

std::string CsvTable::render() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header_.size(); ++i)
        out << (i ? "," : "") << quote_if_needed(header_[i]);
    out << "\r\n";
    for (auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quote_if_needed(row[i]);
        out << "\r\n";
    }
    return out.str();
}

void CsvTable::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrKind::io, "cannot write " + path);
    out << render();
}

std::string CsvTable::num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string CsvTable::num(long v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%ld", v);
    return buf;
}

bool write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series, bool log_x) {
    const int W = 640, H = 420, ML = 70, MR = 20, MT = 40, MB = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    bool degenerate = false;
    for (auto& s : series) {
        if (s.x.size() < 2) degenerate = true;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double xv = log_x ? std::log10(std::max(s.x[i], 1e-300)) : s.x[i];
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (xmin > xmax) {
        xmin = 0.0;
        xmax = 1.0;
    }
    if (xmax - xmin < 1e-12) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    auto X = [&](double x) {
        double v = log_x ? std::log10(std::max(x, 1e-300)) : x;
        return ML + (v - xmin) / (xmax - xmin) * (W - ML - MR);
    };
    auto Y = [&](double y) { return H - MB - (y - ymin) / (ymax - ymin) * (H - MT - MB); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title
        << "</text>\n";
    svg << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << (W - ML - MR) << "\" height=\""
        << (H - MT - MB) << "\" fill=\"none\" stroke=\"black\"/>\n";
    const char* colors[] = {"#1b6ca8", "#c23b22", "#2e8540", "#8e44ad", "#b7950b"};
    int ci = 0;
    for (auto& s : series) {
        std::string color = colors[ci++ % 5];
        if (s.x.size() == 1) {
            svg << "<circle cx=\"" << CsvTable::num(X(s.x[0])) << "\" cy=\""
                << CsvTable::num(Y(s.y[0])) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
        } else {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                svg << CsvTable::num(X(s.x[i])) << "," << CsvTable::num(Y(s.y[i])) << " ";
            svg << "\"/>\n";
        }
        svg << "<text x=\"" << (ML + 8) << "\" y=\"" << (MT + 16 + 16 * (ci - 1))
            << "\" font-size=\"12\" fill=\"" << color << "\">" << s.label << "</text>\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", ymin);
    svg << "<text x=\"6\" y=\"" << (H - MB) << "\" font-size=\"11\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.3g", ymax);
    svg << "<text x=\"6\" y=\"" << (MT + 10) << "\" font-size=\"11\">" << buf << "</text>\n";
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrKind::io, "cannot write " + path);
    out << svg.str();
    return !degenerate;
}

} // namespace krylab
