#include "vnsf/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace vnsf {

namespace {

constexpr const char* kMagic = "VNSF1";

void put_le(std::string& out, double x) {
  auto u = std::bit_cast<std::uint64_t>(x);
  for (int b = 0; b < 8; ++b) {
    out.push_back(static_cast<char>(u & 0xffu));
    u >>= 8;
  }
}

double get_le(const unsigned char* p) {
  std::uint64_t u = 0;
  for (int b = 7; b >= 0; --b) u = (u << 8) | p[b];
  return std::bit_cast<double>(u);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string encode_snapshot(const State& s) {
  const Grid& g = s.grid();
  require_same_grid(g, s.v.grid(), "encode_snapshot(v)");
  require_same_grid(g, s.c.grid(), "encode_snapshot(c)");
  std::string out = kMagic;
  out += "\ndim " + std::to_string(g.dim);
  out += "\nnx " + std::to_string(g.nx);
  out += "\nny " + std::to_string(g.ny);
  out += "\nhx " + fmt(g.hx);
  out += "\nhy " + fmt(g.hy);
  out += "\nt " + fmt(s.t);
  out += "\nbc " + to_string(g.bc);
  out += "\n\n";
  out.reserve(out.size() + 8 * g.cells() * static_cast<std::size_t>(g.dim + 2));
  for (double x : s.rho.values()) put_le(out, x);
  for (double x : s.v.values()) put_le(out, x);
  for (double x : s.c.values()) put_le(out, x);
  return out;
}

State decode_snapshot(const std::string& bytes) {
  std::size_t pos = bytes.find('\n');
  if (pos == std::string::npos || bytes.compare(0, pos, kMagic) != 0) {
    fail(ErrorCode::Format, "snapshot magic mismatch: expected VNSF1");
  }
  ++pos;
  std::map<std::string, std::string> header;
  while (true) {
    const std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string::npos) fail(ErrorCode::Format, "snapshot header is not terminated by a blank line");
    const std::string line = bytes.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) break;
    const std::size_t sp = line.find(' ');
    if (sp == std::string::npos) fail(ErrorCode::Format, "malformed snapshot header line '" + line + "'");
    const std::string key = line.substr(0, sp);
    if (key != "dim" && key != "nx" && key != "ny" && key != "hx" && key != "hy" && key != "t" && key != "bc") {
      fail(ErrorCode::Format, "unknown snapshot header key '" + key + "'");
    }
    if (!header.emplace(key, line.substr(sp + 1)).second) {
      fail(ErrorCode::Format, "duplicate snapshot header key '" + key + "'");
    }
  }
  for (const char* k : {"dim", "nx", "ny", "hx", "hy", "t", "bc"}) {
    if (!header.count(k)) fail(ErrorCode::Format, std::string("snapshot header lacks '") + k + "'");
  }
  auto as_int = [&](const char* k) {
    const std::string& v = header[k];
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0' || x <= 0 || x > (1L << 24)) {
      fail(ErrorCode::Format, std::string("bad snapshot header value for '") + k + "': " + v);
    }
    return static_cast<int>(x);
  };
  auto as_double = [&](const char* k) {
    const std::string& v = header[k];
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || !std::isfinite(x)) {
      fail(ErrorCode::Format, std::string("bad snapshot header value for '") + k + "': " + v);
    }
    return x;
  };
  const std::string& bc_token = header["bc"];
  BcKind bc;
  if (bc_token == "periodic") bc = BcKind::PeriodicAll;
  else if (bc_token == "paper") bc = BcKind::PaperBC;
  else fail(ErrorCode::Format, "unknown boundary condition '" + bc_token + "' in snapshot header");

  Grid g;
  g.dim = as_int("dim");
  g.nx = as_int("nx");
  g.ny = as_int("ny");
  g.hx = as_double("hx");
  g.hy = as_double("hy");
  g.bc = bc;
  if (g.dim != 1 && g.dim != 2) fail(ErrorCode::Format, "snapshot dimension must be 1 or 2");
  if (g.dim == 1 && g.ny != 1) fail(ErrorCode::Format, "one-dimensional snapshot must have ny = 1");
  if (!(g.hx > 0.0 && g.hy > 0.0)) fail(ErrorCode::Format, "snapshot spacings must be positive");
  g.lx = g.hx * g.nx;
  g.ly = g.dim == 1 ? 1.0 : g.hy * g.ny;
  const double t = as_double("t");

  const std::size_t n = g.cells();
  const std::size_t expected = 8 * n * static_cast<std::size_t>(g.dim + 2);
  const std::size_t found = bytes.size() - pos;
  if (found < expected) {
    fail(ErrorCode::Format, "truncated snapshot payload: expected " + std::to_string(expected) + " bytes, found " +
                                std::to_string(found));
  }
  if (found > expected) {
    fail(ErrorCode::Format, "snapshot payload size disagrees with header: expected " + std::to_string(expected) +
                                " bytes, found " + std::to_string(found));
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
  auto read_plane = [&](std::span<double> dst) {
    for (double& x : dst) {
      x = get_le(p);
      p += 8;
    }
  };
  State s{t, ScalarField(g), VectorField(g), ScalarField(g)};
  read_plane(s.rho.values());
  read_plane(s.v.values());
  read_plane(s.c.values());
  return s;
}

void write_snapshot(const State& state, const std::string& path) {
  const std::string bytes = encode_snapshot(state);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

State read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open snapshot '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return decode_snapshot(ss.str());
}

}  // namespace vnsf
