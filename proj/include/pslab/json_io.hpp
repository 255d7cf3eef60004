#pragma once

// JSON encoding of the core types for the CLI: Cx as [re, im], the point at
// infinity as the string "inf", rational functions as {"num", "den"} with
// ascending powers, 2x2 matrices as [[[re,im] x2] x2]. Parsing throws
// BadInput on malformed payloads.

#include <json.hpp>

#include <Eigen/Dense>

#include "pslab/formal.hpp"
#include "pslab/lab.hpp"

namespace pslab {

using Json = nlohmann::ordered_json;

Json cx_to_json(const Cx& z);
Cx cx_from_json(const Json& j);

Json point_to_json(const P1Point& p);
P1Point point_from_json(const Json& j);

Json rf_to_json(const RationalFunction& f);
RationalFunction rf_from_json(const Json& j);

Json matrix_to_json(const Eigen::Matrix2cd& m);

Json divisor_to_json(const Divisor& d);
Divisor divisor_from_json(const Json& j);

Json riccati_to_json(const RiccatiEq& r);
RiccatiEq riccati_from_json(const Json& j);

Json linsys_to_json(const LinearSystem& s);
LinearSystem linsys_from_json(const Json& j);

// {"class", "m", "lambda_plus": [[order, [re,im]], ...], "lambda_minus",
//  "nu": "p/q"}
Json formal_data_to_json(const FormalData& f);

Json family_config_to_json(const FamilyConfig& cfg);
FamilyConfig family_config_from_json(const Json& j);

// safe accessors: missing key / wrong shape raise BadInput
const Json& json_field(const Json& j, const char* key);
Json parse_json_text(const std::string& text);

}  // namespace pslab
