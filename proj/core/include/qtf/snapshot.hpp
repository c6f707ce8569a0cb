#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "qtf/domain.hpp"
#include "qtf/field.hpp"

namespace qtf {

// Snapshot file layout:
//   line 1: UTF-8 JSON header
//     {"format":"qtf-snapshot","version":1,"field":...,"components":N,
//      "time":t,"endianness":"little","layout":"component-major, x fastest",
//      "domain":{"nx":..,"ny":..,"nz":..,"lx":..,"ly":..,"lz":..,"bc":"periodic"|"box"}}
//   followed by N * domain.size() little-endian IEEE-754 doubles.

struct Snapshot {
  std::string field;
  DomainSpec domain;
  double time = 0.0;
  std::size_t components = 0;
  std::vector<double> data;  // component-major

  template <std::size_t N>
  static Snapshot of(const std::string& name, const Field<N>& f, double time) {
    Snapshot s{name, f.domain(), time, N, {}};
    s.data.reserve(N * f.size());
    for (std::size_t c = 0; c < N; ++c) {
      auto comp = f.component(c);
      s.data.insert(s.data.end(), comp.begin(), comp.end());
    }
    return s;
  }

  /// Throws std::invalid_argument when the component count differs from N.
  template <std::size_t N>
  Field<N> to_field() const {
    if (components != N) throw std::invalid_argument("snapshot component count mismatch");
    Field<N> f(domain);
    const std::size_t n = domain.size();
    for (std::size_t c = 0; c < N; ++c)
      std::copy(data.begin() + c * n, data.begin() + (c + 1) * n, f.component(c).begin());
    return f;
  }
};

std::string encode_snapshot(const Snapshot& s);
/// Throws std::runtime_error on a malformed header or truncated payload.
Snapshot decode_snapshot(const std::string& bytes);

void write_snapshot(const std::filesystem::path& path, const Snapshot& s);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace qtf
