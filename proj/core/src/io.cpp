#include "fraclat/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "json.hpp"

namespace fraclat::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  auto p = path;
  p.replace_extension(".json");
  if (p == path) p += ".json";
  return p;
}

namespace {

std::string header(int d) {
  std::string h;
  for (int k = 1; k <= d; ++k) h += "x" + std::to_string(k) + ",";
  return h + "value\n";
}

template <class T>
T parse_number(std::string_view cell, const std::string& where) {
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '+')) cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.remove_suffix(1);
  T v{};
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || end != cell.data() + cell.size())
    throw std::invalid_argument(where + ": cannot parse '" + std::string(cell) + "'");
  return v;
}

}  // namespace

std::string field_csv(const Field& u) {
  const auto& g = u.geometry();
  std::string out = header(g.dim());
  Site x(static_cast<std::size_t>(g.dim()));
  for (std::size_t i = 0; i < g.site_count(); ++i) {
    if (u[i] == 0.0) continue;
    g.site(i, x);
    for (int c : x) out += std::to_string(c) + ",";
    out += format_double(u[i]) + "\n";
  }
  return out;
}

void write_field(const std::filesystem::path& path, const Field& u) {
  const auto& g = u.geometry();
  json meta = {{"d", g.dim()}, {"L", g.radius()}, {"boundary", std::string(to_string(g.boundary()))}};
  write_atomic(path, field_csv(u));
  write_atomic(sidecar_path(path), meta.dump(2) + "\n");
}

Field parse_field_csv(const std::string& text, const LatticeGeometry& geom) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("field CSV is empty");
  std::size_t cols = 1;
  for (char c : line) cols += (c == ',');
  if (static_cast<int>(cols) != geom.dim() + 1)
    throw std::invalid_argument("field CSV header does not match dimension " + std::to_string(geom.dim()));
  Field u(geom);
  Site x(static_cast<std::size_t>(geom.dim()));
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string cell;
    const std::string where = "field CSV row " + std::to_string(row);
    for (int k = 0; k < geom.dim(); ++k) {
      if (!std::getline(ls, cell, ',')) throw std::invalid_argument(where + " is short");
      x[k] = parse_number<int>(cell, where);
    }
    if (!std::getline(ls, cell)) throw std::invalid_argument(where + " has no value");
    const double v = parse_number<double>(cell, where);
    if (!std::isfinite(v)) throw std::invalid_argument("field CSV row " + std::to_string(row) + " is not finite");
    auto idx = geom.locate(x);
    if (!idx || !geom.contains(x))
      throw std::invalid_argument("field CSV row " + std::to_string(row) + " lies outside the box");
    u[*idx] = v;
  }
  return u;
}

Field read_field(const std::filesystem::path& path, const LatticeGeometry& geom) {
  return parse_field_csv(read_text(path), geom);
}

Field read_field(const std::filesystem::path& path) {
  const json meta = json::parse(read_text(sidecar_path(path)));
  LatticeGeometry geom(meta.at("d").get<int>(), meta.at("L").get<int>(),
                       parse_boundary(meta.value("boundary", std::string("zero"))));
  return read_field(path, geom);
}

std::string kernel_csv(const Kernel& K) {
  const int d = K.dim();
  const int side = K.side();
  std::string out = header(d);
  std::size_t count = 1;
  for (int k = 0; k < d; ++k) count *= static_cast<std::size_t>(side);
  Site x(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t r = i;
    for (int k = d - 1; k >= 0; --k) {
      x[k] = static_cast<int>(r % static_cast<std::size_t>(side)) - K.radius();
      r /= static_cast<std::size_t>(side);
    }
    for (int c : x) out += std::to_string(c) + ",";
    out += format_double(K(x)) + "\n";
  }
  return out;
}

void write_kernel(const std::filesystem::path& path, const Kernel& K) {
  json meta = {{"alpha", K.alpha().value()}, {"d", K.dim()}, {"R", K.radius()}, {"M", K.points()},
               {"tail_bound", K.tail_bound()}};
  if (std::isnan(K.doubling_error())) meta["doubling_error"] = nullptr;
  else meta["doubling_error"] = K.doubling_error();
  write_atomic(path, kernel_csv(K));
  write_atomic(sidecar_path(path), meta.dump(2) + "\n");
}

}  // namespace fraclat::io
