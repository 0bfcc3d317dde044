#include "wfr/field_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace wfr {

namespace {

constexpr std::array<char, 8> kMagic = {'W', 'F', 'L', 'D', '0', '0', '0', '1'};

[[noreturn]] void fail(const std::string& path, std::size_t offset,
                       const std::string& what) {
  throw std::runtime_error("field file '" + path + "': " + what +
                           " at byte offset " + std::to_string(offset));
}

}  // namespace

void write_field(const Field2D& field, const std::string& path) {
  if (field.nx() < 1 || field.nt() < 1) {
    throw std::invalid_argument("write_field: empty field");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("write_field: cannot open '" + path + "'");
  }
  out.write(kMagic.data(), kMagic.size());
  const std::int64_t nx = field.nx();
  const std::int64_t nt = field.nt();
  out.write(reinterpret_cast<const char*>(&nx), sizeof(nx));
  out.write(reinterpret_cast<const char*>(&nt), sizeof(nt));
  for (const double* v : {&field.delta_x, &field.delta_t, &field.origin_x,
                          &field.origin_t}) {
    out.write(reinterpret_cast<const char*>(v), sizeof(double));
  }
  std::vector<double> row(static_cast<std::size_t>(nt));
  for (std::int64_t ix = 0; ix < nx; ++ix) {
    for (std::int64_t it = 0; it < nt; ++it) {
      row[static_cast<std::size_t>(it)] = field.values(ix, it);
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) {
    throw std::runtime_error("write_field: write to '" + path + "' failed");
  }
}

Field2D read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_field: cannot open '" + path + "'");
  }
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || std::memcmp(magic.data(), kMagic.data(), kMagic.size()) != 0) {
    fail(path, 0, "bad magic (expected WFLD0001)");
  }
  std::int64_t nx = 0;
  std::int64_t nt = 0;
  in.read(reinterpret_cast<char*>(&nx), sizeof(nx));
  in.read(reinterpret_cast<char*>(&nt), sizeof(nt));
  if (!in) fail(path, 8, "truncated header");
  if (nx < 1 || nt < 1 ||
      nx > std::numeric_limits<std::int32_t>::max() ||
      nt > std::numeric_limits<std::int32_t>::max()) {
    fail(path, 8, "implausible grid dimensions");
  }
  Field2D field;
  std::size_t offset = 24;
  for (double* v :
       {&field.delta_x, &field.delta_t, &field.origin_x, &field.origin_t}) {
    in.read(reinterpret_cast<char*>(v), sizeof(double));
    if (!in) fail(path, offset, "truncated header");
    offset += sizeof(double);
  }
  if (field.delta_x <= 0.0 || field.delta_t <= 0.0) {
    fail(path, 24, "non-positive grid spacing");
  }
  field.values.resize(nx, nt);
  std::vector<double> row(static_cast<std::size_t>(nt));
  for (std::int64_t ix = 0; ix < nx; ++ix) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!in) fail(path, offset, "truncated values payload");
    for (std::int64_t it = 0; it < nt; ++it) {
      field.values(ix, it) = row[static_cast<std::size_t>(it)];
    }
    offset += row.size() * sizeof(double);
  }
  return field;
}

}  // namespace wfr
