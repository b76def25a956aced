// json_io.hpp — JSON (de)serialization of model specs and result payloads.
//
// Wire format: complex numbers are two-element arrays [re, im]; matrices are
// row-major nested arrays. A model file carries either the explicit keys
// "L", "hbar", "h", "lambda_plus", "lambda_minus" or the shorthand
// "xx_chain": {"L","J","h_z","Gamma_1","Gamma_L","nbar_1","nbar_L"[,"hbar"]}.

#pragma once

#include <string>

#include <json.hpp>

#include "quadlind/model.hpp"
#include "quadlind/types.hpp"

namespace quadlind {

nlohmann::json complex_to_json(const Complex& z);
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const ModelSpec& spec);
ModelSpec model_from_json(const nlohmann::json& j);

XXChainParams xx_params_from_json(const nlohmann::json& j);
nlohmann::json xx_params_to_json(const XXChainParams& p);

// Reads a model file; throws ValidationError on unreadable/unparseable input.
ModelSpec load_model_file(const std::string& path);

}  // namespace quadlind
