#include "besovlab/report_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include "besovlab/errors.hpp"

namespace besovlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

}  // namespace

CsvWriter::CsvWriter(std::ostream& out, std::string_view schema, std::vector<std::string> columns)
    : out_(out), columns_(columns.size()) {
  out_ << "# schema=" << schema << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << quote(columns[i]);
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvValue>& values) {
  if (values.size() != columns_) throw InvalidArgument("csv: row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [this](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out_ << format_double(v);
          } else if constexpr (std::is_same_v<T, std::int64_t>) {
            out_ << v;
          } else {
            out_ << quote(v);
          }
        },
        values[i]);
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  std::vector<CsvValue> cells(values.begin(), values.end());
  row(cells);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# schema=", 0) != 0) {
    throw ParseError(path.string() + ": line 1 is not a schema row");
  }
  table.schema = line.substr(9);
  if (!std::getline(in, line)) throw ParseError(path.string() + ": missing header row");
  table.header = split_csv_line(line);
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != table.header.size()) {
      throw ParseError(path.string() + ": line " + std::to_string(lineno) + " has the wrong number of cells");
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_f64_le(std::ostream& out, std::span<const double> values) {
  for (double v : values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    out.write(bytes, 8);
  }
}

std::vector<double> read_f64_le(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::vector<double> values;
  char bytes[8];
  while (in.read(bytes, 8)) {
    std::uint64_t bits;
    std::memcpy(&bits, bytes, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    values.push_back(std::bit_cast<double>(bits));
  }
  if (in.gcount() != 0) throw ParseError(path.string() + ": size is not a multiple of 8 bytes");
  return values;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

namespace {

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

void write_svg_chart(const std::filesystem::path& path, std::string_view title, std::string_view x_label,
                     std::string_view y_label, const std::vector<SvgSeries>& series, bool log_y) {
  constexpr double width = 640, height = 400, left = 70, right = 150, top = 40, bottom = 50;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

  std::vector<std::vector<std::pair<double, double>>> points(series.size());
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    for (std::size_t i = 0; i < std::min(ser.x.size(), ser.y.size()); ++i) {
      double y = ser.y[i];
      if (log_y) {
        if (!(y > 0.0)) continue;
        y = std::log10(y);
      }
      if (!std::isfinite(y) || !std::isfinite(ser.x[i])) continue;
      points[s].emplace_back(ser.x[i], y);
      xmin = std::min(xmin, ser.x[i]);
      xmax = std::max(xmax, ser.x[i]);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmin <= xmax)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double pw = width - left - right, ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

  std::ofstream out(path);
  if (!out) throw NotFoundError("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(title)
      << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    out << "<text x=\"" << fixed(sx(fx)) << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\">"
        << fixed(fx, 3) << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << fixed(sy(fy) + 4) << "\" text-anchor=\"end\">"
        << (log_y ? "1e" + fixed(fy, 1) : fixed(fy, 3)) << "</text>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
      << escape_xml(x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + ph / 2 << ")\">" << escape_xml(y_label) << (log_y ? " (log10)" : "") << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = palette[s % std::size(palette)];
    if (!points[s].empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : points[s]) out << fixed(sx(x)) << ',' << fixed(sy(y)) << ' ';
      out << "\"/>\n";
      for (const auto& [x, y] : points[s]) {
        out << "<circle cx=\"" << fixed(sx(x)) << "\" cy=\"" << fixed(sy(y)) << "\" r=\"2.5\" fill=\"" << colour
            << "\"/>\n";
      }
    }
    const double ly = top + 14 + 18.0 * static_cast<double>(s);
    out << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << width - right + 30
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << width - right + 36 << "\" y=\"" << ly << "\">" << escape_xml(series[s].label)
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace besovlab
