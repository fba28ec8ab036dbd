#include "mixsem/formats.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mixsem/error.hpp"

namespace mixsem::io {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

std::size_t read_count(std::istream& is, const char* what) {
  long long v = 0;
  if (!(is >> v) || v <= 0) throw ParseError(std::string("bad ") + what);
  return static_cast<std::size_t>(v);
}

std::vector<double> read_values(std::istream& is, std::size_t n, const char* what) {
  std::vector<double> values(n);
  std::string tok;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(is >> tok)) throw ParseError(std::string(what) + ": expected " + std::to_string(n) + " values, got " + std::to_string(i));
    const char* end = tok.data() + tok.size();
    const auto res = std::from_chars(tok.data(), end, values[i]);
    if (res.ec != std::errc() || res.ptr != end) throw ParseError(std::string(what) + ": bad number '" + tok + "'");
  }
  if (is >> tok) throw ParseError(std::string(what) + ": trailing data '" + tok + "'");
  return values;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_tensor(std::ostream& os, const RealTensor& t) {
  os << "TNSR1 " << t.rank() << '\n';
  for (std::size_t i = 0; i < t.rank(); ++i) os << (i ? " " : "") << t.dim(i);
  os << '\n';
  const std::size_t row = t.rank() ? t.dim(t.rank() - 1) : 1;
  for (std::size_t i = 0; i < t.size(); ++i) os << format_double(t[i]) << ((i + 1) % row == 0 ? '\n' : ' ');
}

RealTensor read_tensor(std::istream& is) {
  std::string magic;
  if (!(is >> magic) || magic != "TNSR1") throw ParseError("not a TNSR1 file");
  long long rank = -1;
  if (!(is >> rank) || rank < 0) throw ParseError("TNSR1: bad rank");
  Shape shape;
  for (long long i = 0; i < rank; ++i) shape.push_back(read_count(is, "TNSR1 dimension"));
  auto values = read_values(is, shape_volume(shape), "TNSR1");
  return RealTensor(std::move(shape), std::move(values));
}

void save_tensor(const std::filesystem::path& path, const RealTensor& t) {
  auto out = open_out(path);
  write_tensor(out, t);
}

RealTensor load_tensor(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_tensor(in);
}

void write_dmat(std::ostream& os, const RealTensor& m) {
  if (m.rank() != 2 || m.dim(0) != m.dim(1)) throw ShapeError("DMAT1 needs a square matrix");
  const std::size_t d = m.dim(0);
  os << "DMAT1 " << d << '\n';
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) os << (j ? " " : "") << format_double(m[i * d + j]);
    os << '\n';
  }
}

RealTensor read_dmat(std::istream& is) {
  std::string magic;
  if (!(is >> magic) || magic != "DMAT1") throw ParseError("not a DMAT1 file");
  const std::size_t d = read_count(is, "DMAT1 dimension");
  return RealTensor(Shape{d, d}, read_values(is, d * d, "DMAT1"));
}

void save_dmat(const std::filesystem::path& path, const RealTensor& m) {
  auto out = open_out(path);
  write_dmat(out, m);
}

RealTensor load_dmat(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_dmat(in);
}

RealTensor load_any(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string magic;
  in >> magic;
  in.seekg(0);
  if (magic == "DMAT1") return read_dmat(in);
  if (magic == "TNSR1") return read_tensor(in);
  throw ParseError("'" + path.string() + "' is neither TNSR1 nor DMAT1");
}

}  // namespace mixsem::io
