#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "mfdf/dynamics.hpp"
#include "mfdf/errors.hpp"
#include "mfdf/observables.hpp"

namespace mfdf {

/// On-disk snapshot, little-endian:
///   "FDF1" | u64 n | f64 length | f64 time | f64 delta | n x f64 values
/// delta is 0 for equations without a depth parameter.
struct Snapshot {
  std::uint64_t n = 0;
  double length = 0.0;
  double time = 0.0;
  double delta = 0.0;
  std::vector<double> values;
};

inline constexpr std::array<char, 4> kSnapshotMagic = {'F', 'D', 'F', '1'};
inline constexpr std::size_t kSnapshotHeader = 4 + 8 * 4;

namespace detail {

inline void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}
inline void put_f64(std::vector<unsigned char>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline std::uint64_t get_u64(std::span<const unsigned char> in, std::size_t at) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(in[at + b]) << (8 * b);
  return v;
}
inline double get_f64(std::span<const unsigned char> in, std::size_t at) {
  return std::bit_cast<double>(get_u64(in, at));
}

inline void write_bytes(const std::string& path, std::span<const unsigned char> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace detail

inline std::vector<unsigned char> encode_snapshot(const Snapshot& s) {
  std::vector<unsigned char> out;
  out.reserve(kSnapshotHeader + 8 * s.values.size());
  out.insert(out.end(), kSnapshotMagic.begin(), kSnapshotMagic.end());
  detail::put_u64(out, s.values.size());
  detail::put_f64(out, s.length);
  detail::put_f64(out, s.time);
  detail::put_f64(out, s.delta);
  for (double v : s.values) detail::put_f64(out, v);
  return out;
}

inline Snapshot decode_snapshot(std::span<const unsigned char> in) {
  if (in.size() < kSnapshotHeader) {
    throw IoError("truncated snapshot: " + std::to_string(in.size()) + " bytes, header needs " +
                  std::to_string(kSnapshotHeader));
  }
  if (std::memcmp(in.data(), kSnapshotMagic.data(), 4) != 0) throw IoError("bad snapshot magic");
  Snapshot s;
  s.n = detail::get_u64(in, 4);
  s.length = detail::get_f64(in, 12);
  s.time = detail::get_f64(in, 20);
  s.delta = detail::get_f64(in, 28);
  const std::size_t payload = in.size() - kSnapshotHeader;
  if (payload % 8 != 0 || payload / 8 != s.n) {
    throw IoError("snapshot declares n = " + std::to_string(s.n) + " but carries " + std::to_string(payload) +
                  " payload bytes");
  }
  s.values.resize(s.n);
  for (std::size_t j = 0; j < s.n; ++j) s.values[j] = detail::get_f64(in, kSnapshotHeader + 8 * j);
  return s;
}

inline Snapshot make_snapshot(const SimState& state, const EquationSpec& eq) {
  const auto& g = state.field.grid();
  return {g.size(), g.length(), state.time, eq.kind.has_depth() ? eq.kind.delta : 0.0,
          std::vector<double>(state.field.values().begin(), state.field.values().end())};
}

inline void write_snapshot(const SimState& state, const EquationSpec& eq, const std::string& path) {
  detail::write_bytes(path, encode_snapshot(make_snapshot(state, eq)));
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot: " + path);
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

/// Rebuilds the field stored in a snapshot.
inline Field snapshot_field(const Snapshot& s) {
  return Field(SpectralGrid(static_cast<std::size_t>(s.n), s.length), s.values);
}

inline constexpr const char* kDiagnosticsHeader = "t,mass,l2,hamiltonian,hs_half,max_abs";

/// 17 significant digits, C locale.
inline std::string format_real(double v) {
  std::array<char, 40> buf{};
  const int len = std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return std::string(buf.data(), static_cast<std::size_t>(len));
}

inline std::string format_record(const InvariantRecord& r) {
  return format_real(r.time) + ',' + format_real(r.mass) + ',' + format_real(r.l2) + ',' +
         format_real(r.hamiltonian) + ',' + format_real(r.hs_half) + ',' + format_real(r.max_abs);
}

inline std::string format_diagnostics(std::span<const InvariantRecord> records) {
  std::string out = kDiagnosticsHeader;
  out += '\n';
  for (const auto& r : records) {
    out += format_record(r);
    out += '\n';
  }
  return out;
}

inline void write_diagnostics(std::span<const InvariantRecord> records, const std::string& path) {
  const std::string text = format_diagnostics(records);
  detail::write_bytes(path, std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

}  // namespace mfdf
