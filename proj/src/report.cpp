#include "gibbsrec/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "gibbsrec/errors.hpp"

namespace gibbsrec {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_int(std::int64_t v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : cols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ',';
    out_ += header[i];
  }
  out_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != cols_)
    throw DomainError("csv row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot open output file " + path.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw ConfigError("short write to " + path.string());
}

std::string svg_line_plot(const std::vector<double>& xs,
                          const std::vector<double>& ys,
                          const std::string& title) {
  const double W = 640, H = 400, pad = 48;
  double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  if (!xs.empty()) {
    xlo = xhi = xs[0];
    ylo = yhi = ys[0];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xlo = std::min(xlo, xs[i]);
      xhi = std::max(xhi, xs[i]);
      ylo = std::min(ylo, ys[i]);
      yhi = std::max(yhi, ys[i]);
    }
  }
  if (xhi == xlo) xhi = xlo + 1;
  if (yhi == ylo) yhi = ylo + 1;
  auto px = [&](double x) {
    return pad + (x - xlo) / (xhi - xlo) * (W - 2 * pad);
  };
  auto py = [&](double y) {
    return H - pad - (y - ylo) / (yhi - ylo) * (H - 2 * pad);
  };
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
       "height=\"400\" viewBox=\"0 0 640 400\">\n";
  s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"monospace\" font-size=\"14\">" + title + "</text>\n";
  s += "<line x1=\"" + fmt_double(pad) + "\" y1=\"" + fmt_double(H - pad) +
       "\" x2=\"" + fmt_double(W - pad) + "\" y2=\"" + fmt_double(H - pad) +
       "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fmt_double(pad) + "\" y1=\"" + fmt_double(pad) +
       "\" x2=\"" + fmt_double(pad) + "\" y2=\"" + fmt_double(H - pad) +
       "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + fmt_double(pad) + "\" y=\"" + fmt_double(H - pad + 16) +
       "\" font-family=\"monospace\" font-size=\"10\">" + fmt_double(xlo) +
       "</text>\n";
  s += "<text x=\"" + fmt_double(W - pad) + "\" y=\"" +
       fmt_double(H - pad + 16) + "\" text-anchor=\"end\" "
       "font-family=\"monospace\" font-size=\"10\">" + fmt_double(xhi) +
       "</text>\n";
  s += "<text x=\"" + fmt_double(pad - 4) + "\" y=\"" + fmt_double(H - pad) +
       "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">" +
       fmt_double(ylo) + "</text>\n";
  s += "<text x=\"" + fmt_double(pad - 4) + "\" y=\"" + fmt_double(pad) +
       "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">" +
       fmt_double(yhi) + "</text>\n";
  if (!xs.empty()) {
    s += "<polyline fill=\"none\" stroke=\"#1f4e98\" stroke-width=\"1.5\" "
         "points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ' ';
      s += fmt_double(px(xs[i])) + "," + fmt_double(py(ys[i]));
    }
    s += "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace gibbsrec
