#include "expanse/records_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace expanse::io {

namespace {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  os.write(buf, sizeof(T));
}

template <class T>
T get(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

}  // namespace

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols{"s",        "charge",          "grad_sq",         "potential",
                                             "energy",   "charge_residual", "energy_residual", "virial2",
                                             "heisenberg_slack", "K_value", "max_amp"};
  return cols;
}

void write_records_header(std::ostream& os) {
  const auto& c = record_columns();
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << "\n";
}

void write_record_row(std::ostream& os, const DiagnosticsRecord& r) {
  const double v[] = {r.s,      r.charge,          r.grad_sq,         r.potential,
                      r.energy, r.charge_residual, r.energy_residual, r.virial2,
                      r.heisenberg_slack, r.K_value, r.max_amp};
  std::string line;
  for (std::size_t i = 0; i < std::size(v); ++i) {
    if (i) line += ',';
    line += format_double(v[i]);
  }
  line += '\n';
  os << line;
}

void write_records(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write records file '" + path + "'");
  write_records_header(os);
  for (const auto& r : records) write_record_row(os, r);
  if (!os) throw std::runtime_error("error writing records file '" + path + "'");
}

void write_snapshot(const std::string& path, const SnapshotHeader& h, const Field& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write snapshot '" + path + "'");
  os.write(kSnapshotMagic, 8);
  put<std::uint32_t>(os, h.version);
  put<std::uint32_t>(os, h.dim);
  put<std::uint64_t>(os, h.points);
  put<double>(os, h.length);
  put<double>(os, h.s);
  put<std::uint64_t>(os, h.step);
  const char reserved[16] = {};
  os.write(reserved, sizeof(reserved));
  for (const auto& z : u) {
    put<double>(os, z.real());
    put<double>(os, z.imag());
  }
  if (!os) throw std::runtime_error("error writing snapshot '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot '" + path + "'");
  char head[64];
  if (!in.read(head, 64)) throw std::runtime_error("snapshot '" + path + "' is shorter than its header");
  if (std::memcmp(head, kSnapshotMagic, 8) != 0) throw std::runtime_error("snapshot '" + path + "' has a bad magic");
  Snapshot s;
  s.header.version = get<std::uint32_t>(head + 8);
  s.header.dim = get<std::uint32_t>(head + 12);
  s.header.points = get<std::uint64_t>(head + 16);
  s.header.length = get<double>(head + 24);
  s.header.s = get<double>(head + 32);
  s.header.step = get<std::uint64_t>(head + 40);
  if (s.header.version != 1) throw std::runtime_error("unsupported snapshot version");
  if (s.header.dim < 1 || s.header.dim > 3) throw std::runtime_error("snapshot dimension out of range");
  std::uint64_t total = 1;
  for (std::uint32_t a = 0; a < s.header.dim; ++a) total *= s.header.points;
  std::vector<char> payload(total * 16);
  if (!in.read(payload.data(), static_cast<std::streamsize>(payload.size()))) {
    throw std::runtime_error("snapshot '" + path + "' payload is truncated");
  }
  s.u.resize(total);
  for (std::uint64_t i = 0; i < total; ++i) {
    s.u[i] = Complex(get<double>(payload.data() + 16 * i), get<double>(payload.data() + 16 * i + 8));
  }
  return s;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace expanse::io
