#pragma once

#include <string>
#include <vector>

namespace krylab {

inline const char* tool_version() { return "krylab 0.1.0"; }

// RFC-4180 style CSV: header row, quoted fields where needed, deterministic
// float formatting.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row);
    std::string render() const;
    void write(const std::string& path) const;
    std::size_t rows() const { return rows_.size(); }

    static std::string num(double v);
    static std::string num(long v);

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Minimal line-plot SVG (one polyline per series over shared x values).
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Returns false (and still writes a degenerate plot) when a series has a
// single point; callers log a warning in that case.
bool write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series, bool log_x = false);

} // namespace krylab
