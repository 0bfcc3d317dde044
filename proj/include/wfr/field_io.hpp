#pragma once

#include <string>

#include "wfr/field.hpp"

namespace wfr {

// Binary field container, little-endian:
//   bytes 0..7   magic "WFLD0001"
//   int64        n_x, n_t
//   float64      delta_x, delta_t, origin_x, origin_t
//   float64[n_x * n_t]  values, row-major by x (value(ix, it) at ix*n_t + it)
//
// read_field throws std::runtime_error naming the byte offset of the first
// inconsistency (bad magic, bad header values, or truncated payload).
void write_field(const Field2D& field, const std::string& path);
Field2D read_field(const std::string& path);

}  // namespace wfr
