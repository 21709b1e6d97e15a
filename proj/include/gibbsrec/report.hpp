#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gibbsrec {

// Shortest round-trip decimal form; the canonical number spelling for every
// CSV and SVG byte we emit, so identical runs produce identical files.
std::string fmt_double(double v);
std::string fmt_int(std::int64_t v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  const std::string& text() const { return out_; }

 private:
  std::string out_;
  std::size_t cols_;
};

void write_file(const std::filesystem::path& path, const std::string& bytes);

// Static line plot of ys over xs; display only, never a source of truth.
std::string svg_line_plot(const std::vector<double>& xs,
                          const std::vector<double>& ys,
                          const std::string& title);

}  // namespace gibbsrec
