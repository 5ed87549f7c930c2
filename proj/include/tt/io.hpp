#pragma once

#include <iosfwd>
#include <string>

#include "tt/tensor_train.hpp"

namespace tt {

/// TT file format, version 1: JSON with phys_dims, bond_dims, and flat
/// row-major core values serialized at >= 17 significant digits.
void write_tt_json(const TensorTrain& tt, std::ostream& os);
void write_tt_json_file(const TensorTrain& tt, const std::string& path);

TensorTrain read_tt_json(std::istream& is);
TensorTrain read_tt_json_file(const std::string& path);

} // namespace tt
