#pragma once

// Binary snapshot format:
//
//   VNSF1
//   dim <int>
//   nx <int>
//   ny <int>
//   hx <%.17g>
//   hy <%.17g>
//   t <%.17g>
//   bc periodic|paper
//   <blank line>
//   little-endian float64 planes rho, v1, (v2), c, row-major
//
// Reading back a written state is bit-exact.

#include <string>

#include "vnsf/fields.hpp"

namespace vnsf {

std::string encode_snapshot(const State& state);
State decode_snapshot(const std::string& bytes);

void write_snapshot(const State& state, const std::string& path);
State read_snapshot(const std::string& path);

}  // namespace vnsf
