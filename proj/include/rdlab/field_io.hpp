#pragma once

// Field snapshot persistence. The CSV form writes values at 17 significant
// digits (round-trips IEEE doubles bit-exactly); the binary form is a flat
// native-endian dump. Both carry the grid in a header and store values in
// row-major node order.

#include "rdlab/grid.hpp"

#include <string>

namespace rdlab {

void write_field_csv(const Field& f, const std::string& path);
Field read_field_csv(const std::string& path);

void write_field_binary(const Field& f, const std::string& path);
Field read_field_binary(const std::string& path);

} // namespace rdlab
