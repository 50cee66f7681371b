#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "idlink/error.hpp"

namespace idlink::detail {

static_assert(std::endian::native == std::endian::little,
              "binary artifacts are written in host order; only little-endian hosts are supported");

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::string& what) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw DataError("truncated " + what);
  return value;
}

}  // namespace idlink::detail
