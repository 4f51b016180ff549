#pragma once

#include "nsdiag/grid.hpp"

#include <string>
#include <variant>

namespace nsdiag {

struct SpaceTimeRecord;

// F3B1 field file: magic "F3B1", u32 n, f64 box_length (little-endian),
// then 1 or 3 * n^3 little-endian f64 samples in x-fastest order.
void write_f3b1(const std::string& path, const ScalarField& f);
void write_f3b1(const std::string& path, const VectorField& v);

using AnyField = std::variant<ScalarField, VectorField>;
AnyField read_f3b1(const std::string& path);
ScalarField read_f3b1_scalar(const std::string& path);
VectorField read_f3b1_vector(const std::string& path);

// ST31 record file: magic "ST31", u32 snapshot count, then per snapshot
// f64 t followed by F3B1 payload for velocity then pressure.
// Viscosity and provenance travel in a "<path>.meta.json" sidecar.
void write_st31(const std::string& path, const SpaceTimeRecord& rec);
SpaceTimeRecord read_st31(const std::string& path);

} // namespace nsdiag
