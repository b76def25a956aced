#include "quadlind/json_io.hpp"

#include <fstream>

namespace quadlind {

using nlohmann::json;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return Complex(j[0].get<double>(), j[1].get<double>());
    }
    throw ValidationError("expected a complex value as [re, im] (or a plain number), got: " +
                          j.dump());
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array of rows");
    const Index rows = static_cast<Index>(j.size());
    if (!j[0].is_array()) throw ValidationError("matrix rows must be arrays");
    const Index cols = static_cast<Index>(j[0].size());
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<Index>(j[i].size()) != cols) {
            throw ValidationError("matrix rows have inconsistent lengths");
        }
        for (Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

json model_to_json(const ModelSpec& spec) {
    json j;
    j["L"] = spec.L;
    j["hbar"] = spec.hbar;
    j["h"] = matrix_to_json(spec.h);
    j["lambda_plus"] = matrix_to_json(spec.lambda_plus);
    j["lambda_minus"] = matrix_to_json(spec.lambda_minus);
    return j;
}

XXChainParams xx_params_from_json(const json& j) {
    XXChainParams p;
    try {
        p.L = j.at("L").get<Index>();
        p.J = j.at("J").get<double>();
        p.h_z = j.at("h_z").get<double>();
        p.Gamma_1 = j.at("Gamma_1").get<double>();
        p.Gamma_L = j.at("Gamma_L").get<double>();
        p.nbar_1 = j.at("nbar_1").get<double>();
        p.nbar_L = j.at("nbar_L").get<double>();
        if (j.contains("hbar")) p.hbar = j.at("hbar").get<double>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad xx_chain block: ") + e.what());
    }
    return p;
}

json xx_params_to_json(const XXChainParams& p) {
    return json{{"L", p.L},           {"J", p.J},           {"h_z", p.h_z},
                {"Gamma_1", p.Gamma_1}, {"Gamma_L", p.Gamma_L}, {"nbar_1", p.nbar_1},
                {"nbar_L", p.nbar_L},   {"hbar", p.hbar}};
}

ModelSpec model_from_json(const json& j) {
    if (j.contains("xx_chain")) {
        XXChainParams p = xx_params_from_json(j.at("xx_chain"));
        if (j.contains("hbar")) p.hbar = j.at("hbar").get<double>();
        return build_xx_chain(p);
    }
    ModelSpec spec;
    try {
        spec.L = j.at("L").get<Index>();
        if (j.contains("hbar")) spec.hbar = j.at("hbar").get<double>();
        spec.h = matrix_from_json(j.at("h"));
        spec.lambda_plus = matrix_from_json(j.at("lambda_plus"));
        spec.lambda_minus = matrix_from_json(j.at("lambda_minus"));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad model JSON: ") + e.what());
    }
    return spec;
}

ModelSpec load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("cannot parse model file " + path + ": " + e.what());
    }
    return model_from_json(j);
}

}  // namespace quadlind
