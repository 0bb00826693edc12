#pragma once

// Serialization: diagnostics CSV (LF endings, shortest round-trip decimals,
// byte-deterministic), the SGHF binary snapshot format, and run manifests.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spinflow/diagnostics.hpp"
#include "spinflow/field.hpp"
#include "spinflow/toy2d.hpp"

namespace spinflow {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

class SnapshotError : public std::runtime_error {
 public:
  enum class Kind { BadMagic, BadVersion, Truncated };
  SnapshotError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind(kind) {}
  Kind kind;
};

// Shortest decimal that round-trips the double (0 prints as "0").
std::string format_double(double v);

std::string diagnostics_csv_string(const std::vector<DiagnosticsRow>& rows);
void write_diagnostics_csv(const std::vector<DiagnosticsRow>& rows, const std::string& path);

std::string toy_csv_string(const std::vector<ToyRow>& rows);
void write_toy_csv(const std::vector<ToyRow>& rows, const std::string& path);

// SGHF snapshot: magic "SGHF" | u32 version=1 | u32 ndim | u32 n[ndim]
// | f64 length[ndim] | u32 ncomp | f64 payload, node-major, x fastest,
// components contiguous per node. All integers and doubles little-endian.
// read(write(f)) is the identity bit for bit.
std::vector<unsigned char> snapshot_bytes(const Field& f);
void write_snapshot(const Field& f, const std::string& path);
Field read_snapshot(const std::string& path);

// key = value manifest; written with status=running at start, finalized after.
struct Manifest {
  std::vector<std::pair<std::string, std::string>> entries;
  void set(const std::string& key, const std::string& value);
  std::string to_string() const;
};
void write_text_file(const std::string& path, const std::string& content);
std::string timestamp_utc();

}  // namespace spinflow
