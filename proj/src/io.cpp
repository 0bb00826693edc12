#include "spinflow/io.hpp"

#include <bit>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace spinflow {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_cell_ll(long long v) { return std::to_string(v); }

}  // namespace

std::string diagnostics_csv_string(const std::vector<DiagnosticsRow>& rows) {
  std::string out =
      "step,t,dt,energy,weighted_l2,weighted_h1,min_rho,max_rho,nodal_fraction,resA_l2,resA_linf,"
      "energy_gap\n";
  for (const DiagnosticsRow& r : rows) {
    out += csv_cell_ll(r.step);
    out += ',';
    out += format_double(r.t);
    out += ',';
    out += format_double(r.dt);
    out += ',';
    out += format_double(r.energy);
    out += ',';
    out += format_double(r.weighted_l2);
    out += ',';
    out += format_double(r.weighted_h1);
    out += ',';
    out += format_double(r.min_rho);
    out += ',';
    out += format_double(r.max_rho);
    out += ',';
    out += format_double(r.nodal_fraction);
    out += ',';
    out += format_double(r.resA_l2);
    out += ',';
    out += format_double(r.resA_linf);
    out += ',';
    out += format_double(r.energy_gap);
    out += '\n';
  }
  return out;
}

void write_diagnostics_csv(const std::vector<DiagnosticsRow>& rows, const std::string& path) {
  write_text_file(path, diagnostics_csv_string(rows));
}

std::string toy_csv_string(const std::vector<ToyRow>& rows) {
  std::string out = "step,t,dt,linf_err,l2_err,mass,detg_min,detg_max\n";
  for (const ToyRow& r : rows) {
    out += csv_cell_ll(r.step);
    out += ',';
    out += format_double(r.t);
    out += ',';
    out += format_double(r.dt);
    out += ',';
    out += format_double(r.linf_err);
    out += ',';
    out += format_double(r.l2_err);
    out += ',';
    out += format_double(r.mass);
    out += ',';
    out += format_double(r.detg_min);
    out += ',';
    out += format_double(r.detg_max);
    out += '\n';
  }
  return out;
}

void write_toy_csv(const std::vector<ToyRow>& rows, const std::string& path) {
  write_text_file(path, toy_csv_string(rows));
}

namespace {

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

void put_f64(std::vector<unsigned char>& out, double v) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xff));
}

struct Reader {
  const unsigned char* p;
  std::size_t left;
  void need(std::size_t n, const std::string& what) {
    if (left < n)
      throw SnapshotError(SnapshotError::Kind::Truncated, "snapshot truncated while reading " + what);
  }
  std::uint32_t u32(const std::string& what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    p += 4;
    left -= 4;
    return v;
  }
  double f64(const std::string& what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    p += 8;
    left -= 8;
    return std::bit_cast<double>(v);
  }
};

constexpr char kMagic[4] = {'S', 'G', 'H', 'F'};
constexpr std::uint32_t kSnapshotVersion = 1;

}  // namespace

std::vector<unsigned char> snapshot_bytes(const Field& f) {
  const Grid& g = f.grid();
  std::vector<unsigned char> out;
  out.reserve(24 + f.size() * 8);
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kSnapshotVersion);
  put_u32(out, static_cast<std::uint32_t>(g.dim));
  for (int a = 0; a < g.dim; ++a) put_u32(out, static_cast<std::uint32_t>(g.n[a]));
  for (int a = 0; a < g.dim; ++a) put_f64(out, g.length[a]);
  put_u32(out, static_cast<std::uint32_t>(f.ncomp()));
  for (std::size_t i = 0; i < f.size(); ++i) put_f64(out, f[i]);
  return out;
}

void write_snapshot(const Field& f, const std::string& path) {
  const std::vector<unsigned char> bytes = snapshot_bytes(f);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("write failed: " + path);
}

Field read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  Reader r{bytes.data(), bytes.size()};
  r.need(4, "magic");
  if (std::memcmp(r.p, kMagic, 4) != 0)
    throw SnapshotError(SnapshotError::Kind::BadMagic, "not a SGHF snapshot: " + path);
  r.p += 4;
  r.left -= 4;
  const std::uint32_t version = r.u32("version");
  if (version != kSnapshotVersion)
    throw SnapshotError(SnapshotError::Kind::BadVersion,
                        "unsupported snapshot version " + std::to_string(version));
  const std::uint32_t ndim = r.u32("ndim");
  if (ndim != 2 && ndim != 3)
    throw SnapshotError(SnapshotError::Kind::Truncated, "snapshot has bad ndim");
  int n[3] = {1, 1, 1};
  double len[3] = {1.0, 1.0, 1.0};
  for (std::uint32_t a = 0; a < ndim; ++a) n[a] = static_cast<int>(r.u32("node count"));
  for (std::uint32_t a = 0; a < ndim; ++a) len[a] = r.f64("axis length");
  const std::uint32_t ncomp = r.u32("ncomp");
  const Grid g = ndim == 3 ? make_grid_3d(n[0], n[1], n[2], len[0], len[1], len[2])
                           : make_grid_2d(n[0], n[1], len[0], len[1]);
  Field f(g, static_cast<int>(ncomp));
  r.need(f.size() * 8, "payload");
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = r.f64("payload");
  return f;
}

void Manifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

std::string Manifest::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw IoError("write failed: " + path);
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace spinflow
