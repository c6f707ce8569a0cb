#include "qtf/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qtf {

namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

}  // namespace

std::string encode_snapshot(const Snapshot& s) {
  if (s.data.size() != s.components * s.domain.size())
    throw std::invalid_argument("snapshot payload size does not match domain and components");
  nlohmann::json header = {
      {"format", "qtf-snapshot"},
      {"version", 1},
      {"field", s.field},
      {"components", s.components},
      {"time", s.time},
      {"endianness", "little"},
      {"layout", "component-major, x fastest"},
      {"domain",
       {{"nx", s.domain.nx},
        {"ny", s.domain.ny},
        {"nz", s.domain.nz},
        {"lx", s.domain.lx},
        {"ly", s.domain.ly},
        {"lz", s.domain.lz},
        {"bc", to_string(s.domain.bc)}}}};
  std::string out = header.dump();
  out.push_back('\n');
  const std::size_t start = out.size();
  out.resize(start + 8 * s.data.size());
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(s.data[i]));
    std::memcpy(out.data() + start + 8 * i, &bits, 8);
  }
  return out;
}

Snapshot decode_snapshot(const std::string& bytes) {
  const auto nl = bytes.find('\n');
  if (nl == std::string::npos) throw std::runtime_error("snapshot: missing header terminator");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(bytes.substr(0, nl));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("snapshot: bad header: ") + e.what());
  }
  if (h.value("format", "") != "qtf-snapshot") throw std::runtime_error("snapshot: unknown format");
  if (h.value("endianness", "") != "little")
    throw std::runtime_error("snapshot: unsupported endianness");
  Snapshot s;
  try {
    s.field = h.at("field").get<std::string>();
    s.components = h.at("components").get<std::size_t>();
    s.time = h.at("time").get<double>();
    const auto& d = h.at("domain");
    s.domain.nx = d.at("nx").get<int>();
    s.domain.ny = d.at("ny").get<int>();
    s.domain.nz = d.at("nz").get<int>();
    s.domain.lx = d.at("lx").get<double>();
    s.domain.ly = d.at("ly").get<double>();
    s.domain.lz = d.at("lz").get<double>();
    s.domain.bc = boundary_kind_from_string(d.at("bc").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("snapshot: bad header field: ") + e.what());
  }
  const std::size_t count = s.components * s.domain.size();
  if (bytes.size() - nl - 1 != 8 * count)
    throw std::runtime_error("snapshot: payload length does not match header");
  s.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, bytes.data() + nl + 1 + 8 * i, 8);
    s.data[i] = std::bit_cast<double>(to_little(bits));
  }
  return s;
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const std::string bytes = encode_snapshot(s);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return decode_snapshot(ss.str());
}

}  // namespace qtf
