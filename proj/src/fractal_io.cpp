#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "contractio/fractal.hpp"
#include "json.hpp"

namespace contractio::fractal {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& os, const CompactSet& set) {
  os << "# dim=" << set.dim() << " eps=" << format_double(set.resolution()) << "\n";
  for (std::size_t p = 0; p < set.size(); ++p) {
    const auto x = set.point(p);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i > 0) os << ',';
      os << format_double(x[i]);
    }
    os << '\n';
  }
}

CompactSet read_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("csv: missing header");
  unsigned long dim = 0;
  char eps_text[64] = {0};
  if (std::sscanf(header.c_str(), "# dim=%lu eps=%63s", &dim, eps_text) != 2 || dim == 0) {
    throw std::runtime_error("csv: header must read '# dim=<d> eps=<eps>'");
  }
  const double eps = parse_double(eps_text, 1);

  std::vector<double> coords;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::size_t fields = 0;
    while (std::getline(ss, field, ',')) {
      coords.push_back(parse_double(field, line_no));
      ++fields;
    }
    if (fields != dim) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                               " coordinates");
    }
  }
  return CompactSet(dim, eps, std::move(coords));
}

Viewport Viewport::fit(const CompactSet& set, std::size_t width, std::size_t height) {
  Viewport v;
  v.width = width;
  v.height = height;
  if (set.empty()) return v;
  v.xmin = v.ymin = INFINITY;
  v.xmax = v.ymax = -INFINITY;
  for (std::size_t p = 0; p < set.size(); ++p) {
    const auto x = set.point(p);
    v.xmin = std::min(v.xmin, x[0]);
    v.xmax = std::max(v.xmax, x[0]);
    const double y = x.size() > 1 ? x[1] : 0.0;
    v.ymin = std::min(v.ymin, y);
    v.ymax = std::max(v.ymax, y);
  }
  return v;
}

void write_pgm(std::ostream& os, const CompactSet& set, const Viewport& view) {
  if (view.width == 0 || view.height == 0) throw std::invalid_argument("write_pgm: empty viewport");
  std::vector<unsigned char> pixels(view.width * view.height, 0);
  auto to_pixel = [](double v, double lo, double hi, std::size_t n) -> long {
    if (!(hi > lo)) return static_cast<long>(n / 2);
    return std::lround((v - lo) / (hi - lo) * static_cast<double>(n - 1));
  };
  for (std::size_t p = 0; p < set.size(); ++p) {
    const auto x = set.point(p);
    const long col = to_pixel(x[0], view.xmin, view.xmax, view.width);
    long row;
    if (x.size() > 1) {
      row = static_cast<long>(view.height - 1) - to_pixel(x[1], view.ymin, view.ymax, view.height);
    } else {
      row = static_cast<long>(view.height / 2);
    }
    if (col < 0 || row < 0 || col >= static_cast<long>(view.width) || row >= static_cast<long>(view.height)) {
      continue;
    }
    pixels[static_cast<std::size_t>(row) * view.width + static_cast<std::size_t>(col)] = 255;
  }
  os << "P5\n" << view.width << ' ' << view.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

IFS parse_ifs_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("ifs json: ") + e.what());
  }
  if (!j.contains("dim") || !j.contains("maps")) throw std::invalid_argument("ifs json: need 'dim' and 'maps'");
  if (!j.at("dim").is_number_integer() || !j.at("maps").is_array()) {
    throw std::invalid_argument("ifs json: 'dim' must be an integer and 'maps' an array");
  }
  const auto d = j.at("dim").get<long>();
  if (d <= 0) throw std::invalid_argument("ifs json: 'dim' must be positive");
  std::vector<AffineMap> maps;
  for (const auto& m : j.at("maps")) {
    std::vector<double> a, b;
    try {
      a = m.at("A").get<std::vector<double>>();
      b = m.at("b").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("ifs json: bad map entry: ") + e.what());
    }
    if (a.size() != static_cast<std::size_t>(d * d) || b.size() != static_cast<std::size_t>(d)) {
      throw std::invalid_argument("ifs json: map with wrong 'A'/'b' sizes for dim " + std::to_string(d));
    }
    Eigen::MatrixXd A(d, d);
    for (long r = 0; r < d; ++r) {
      for (long c = 0; c < d; ++c) A(r, c) = a[static_cast<std::size_t>(r * d + c)];
    }
    maps.emplace_back(std::move(A), Eigen::Map<const Eigen::VectorXd>(b.data(), d));
  }
  return IFS(std::move(maps));
}

std::string ifs_to_json(const IFS& ifs) {
  using nlohmann::json;
  json j;
  j["dim"] = ifs.dim();
  j["maps"] = json::array();
  for (const auto& m : ifs.maps()) {
    std::vector<double> a;
    for (Eigen::Index r = 0; r < m.matrix().rows(); ++r) {
      for (Eigen::Index c = 0; c < m.matrix().cols(); ++c) a.push_back(m.matrix()(r, c));
    }
    std::vector<double> b(m.offset().data(), m.offset().data() + m.offset().size());
    j["maps"].push_back({{"A", a}, {"b", b}});
  }
  return j.dump();
}

}  // namespace contractio::fractal
