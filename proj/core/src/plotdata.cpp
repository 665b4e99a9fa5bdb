#include <algorithm>
#include <iterator>
#include <string>
#include <vector>

#include "hwsnkey/error.hpp"
#include "hwsnkey/experiment.hpp"

namespace hwsnkey {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string header_line(std::string_view x_name) {
  return "# " + std::string(x_name.empty() ? "x" : x_name) +
         " analytical simulated stderr trials\n";
}

}  // namespace

std::vector<PlotSeries> emit_plotdata(std::string_view csv) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < csv.size()) {
    auto end = csv.find('\n', start);
    if (end == std::string_view::npos) end = csv.size();
    auto line = csv.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty() || lines.front() != kResultCsvHeader) {
    throw FormatError("result csv: missing or unexpected header line");
  }

  std::vector<PlotSeries> series;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_fields(lines[i]);
    if (f.size() != 9) {
      throw FormatError("result csv line " + std::to_string(i + 1) + ": expected 9 fields, got " +
                        std::to_string(f.size()));
    }
    if (f[3].empty()) {
      throw FormatError("result csv line " + std::to_string(i + 1) + ": empty x value");
    }
    auto it = std::find_if(series.begin(), series.end(), [&](const PlotSeries& s) {
      return s.scheme == f[0] && s.metric == f[1] && s.params == f[4];
    });
    if (it == series.end()) {
      series.push_back({std::string(f[0]), std::string(f[1]), std::string(f[4]),
                        header_line(f[2])});
      it = std::prev(series.end());
    }
    it->text += std::string(f[3]) + ' ' + std::string(f[5]) + ' ' + std::string(f[6]) + ' ' +
                std::string(f[7]) + ' ' + std::string(f[8]) + '\n';
  }
  if (series.empty()) series.push_back({"", "", "", header_line("")});
  return series;
}

}  // namespace hwsnkey
