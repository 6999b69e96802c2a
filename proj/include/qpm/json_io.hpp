#pragma once

#include <json.hpp>
#include <string>

#include "qpm/cneg.hpp"
#include "qpm/qorder.hpp"
#include "qpm/qpure.hpp"
#include "qpm/superop.hpp"

namespace qpm {

// JSON map format: {"dim_in": n, "dim_out": m, "repr": "kraus"|"superop"|
// "choi"|"schur"|"state", "data": ...} with complex scalars as [re, im]
// pairs and matrices as row-major nested arrays.  Rectangular maps carry
// "shape_in": [r, c] and "shape_out": [r, c] instead of the dim fields.

struct InputError : Error {
  using Error::Error;
};

nlohmann::json complex_to_json(const Complex& z);
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json mat_to_json(const Mat& A);
Mat mat_from_json(const nlohmann::json& j);

SuperOp superop_from_json(const nlohmann::json& j);
nlohmann::json superop_to_json(const SuperOp& phi,
                               const std::string& repr = "superop");

SuperOp load_superop(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

nlohmann::json cert_to_json(const PositivityCert& cert);
nlohmann::json cnegform_to_json(const CnegForm& form);
nlohmann::json qpure_verdict_to_json(const QPureVerdict& v);

}  // namespace qpm
