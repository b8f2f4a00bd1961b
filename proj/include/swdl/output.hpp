// CSV and SVG emitters. CSV is the canonical output (header row names the
// units, fixed numeric formatting for byte-identical reruns); SVG plots
// are minimal polyline renderings.

#pragma once

#include <string>
#include <vector>

namespace swdl {

// Tracks files written by one command; anything not committed is removed
// on destruction so failures leave no partial outputs.
class OutputSession {
  public:
    explicit OutputSession(std::string dir);
    ~OutputSession();
    OutputSession(const OutputSession&) = delete;
    OutputSession& operator=(const OutputSession&) = delete;

    std::string path(const std::string& filename);
    void commit();
    const std::vector<std::string>& files() const { return files_; }

  private:
    std::string dir_;
    std::vector<std::string> files_;
    bool committed_ = false;
};

std::string format_number(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

} // namespace swdl
