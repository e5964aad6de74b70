#include "frachelm/field_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "frachelm/errors.hpp"

namespace frachelm {

static_assert(std::endian::native == std::endian::little, "field files assume a little-endian host");

namespace {

constexpr char kMagic[4] = {'F', 'H', 'F', '1'};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void write_field(const std::string& path, const ComplexField& field) {
  const BoxGrid& g = field.grid();
  std::ostringstream out(std::ios::binary);
  out.write(kMagic, 4);
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(g.n), static_cast<std::uint32_t>(g.n),
                                 static_cast<std::uint32_t>(g.n)};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  out.write(reinterpret_cast<const char*>(&g.L), sizeof(double));
  for (const cplx& v : field.values()) {
    const double pair[2] = {v.real(), v.imag()};
    out.write(reinterpret_cast<const char*>(pair), sizeof(pair));
  }
  write_text_atomic(path, out.str());
}

ComplexField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  char magic[4];
  std::uint32_t dims[3];
  double L = 0.0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  in.read(reinterpret_cast<char*>(&L), sizeof(L));
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error(ErrorKind::IoError, path + ": not a field file");
  if (dims[0] != dims[1] || dims[1] != dims[2]) throw Error(ErrorKind::IoError, path + ": only cubic grids are supported");
  BoxGrid grid{L, static_cast<int>(dims[0])};
  grid.validate();
  std::vector<cplx> values(grid.size());
  for (cplx& v : values) {
    double pair[2];
    in.read(reinterpret_cast<char*>(pair), sizeof(pair));
    v = {pair[0], pair[1]};
  }
  if (!in) throw Error(ErrorKind::IoError, path + ": truncated field data");
  return ComplexField(grid, std::move(values));
}

void write_metadata(const std::string& path, const Metadata& meta) {
  std::ostringstream out;
  for (const auto& [k, v] : meta) out << k << " = " << v << '\n';
  write_text_atomic(path, out.str());
}

Metadata read_metadata(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  Metadata meta;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    meta[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return meta;
}

void write_text_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoError, "rename to " + path + " failed: " + ec.message());
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
  }
  return h;
}

std::string hex_digest(std::uint64_t value) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << value;
  return out.str();
}

}  // namespace frachelm
