#pragma once

// File formats: matrices and states as {"dims", "re", "im"} (row-major),
// POVMs as {"class": "ONE_LOCC", "alice", "bob"} or {"class", "elements"},
// solver results, and the number formatting shared by every CSV writer.

#include <optional>
#include <string>

#include <json.hpp>

#include "entkit/matqi.hpp"
#include "entkit/povm.hpp"
#include "entkit/sepopt.hpp"

namespace entkit {

using Json = nlohmann::ordered_json;

// 12 significant digits; non-finite values print as inf, -inf, nan.
std::string format_number(double v);

// Finite values as JSON numbers, others as the strings "inf", "-inf", "nan".
Json json_number(double v);

Json matrix_to_json(const CMatrix& m, const Dims& dims);
Json state_to_json(const DensityMatrix& rho);

struct ParsedMatrix {
  Dims dims;
  CMatrix matrix;
};

// Throws ParseError on missing fields or ragged/mismatched shapes.
ParsedMatrix matrix_from_json(const Json& j);

// Throws InvariantError naming every failed state invariant.
DensityMatrix state_from_json(const Json& j);

Json povm_to_json(const Povm& m);
Json povm_to_json(const OneWayLoccPovm& m);

struct ParsedPovm {
  Povm povm;
  std::optional<OneWayLoccPovm> one_way;  // present for "ONE_LOCC" input
};

ParsedPovm povm_from_json(const Json& j);

Json fw_result_to_json(const FwResult& r);

// Throws Error when the file cannot be read, ParseError when it is not JSON.
Json read_json_file(const std::string& path);

}  // namespace entkit
