#include "qpm/json_io.hpp"

#include <cmath>
#include <fstream>

namespace qpm {

using nlohmann::json;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw InputError("expected a complex scalar as [re, im]");
}

json mat_to_json(const Mat& A) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      row.push_back(complex_to_json(A(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw InputError("expected a matrix as nested arrays");
  Eigen::Index rows = Eigen::Index(j.size());
  Eigen::Index cols = Eigen::Index(j[0].size());
  Mat A(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || Eigen::Index(j[r].size()) != cols)
      throw InputError("ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      A(r, c) = complex_from_json(j[r][c]);
  }
  return A;
}

SuperOp superop_from_json(const json& j) {
  if (!j.is_object() || !j.contains("repr") || !j.contains("data"))
    throw InputError("map object needs repr and data fields");
  std::string repr = j.at("repr").get<std::string>();

  Eigen::Index ri, ci, ro, co;
  if (j.contains("shape_in") && j.contains("shape_out")) {
    ri = j.at("shape_in").at(0).get<Eigen::Index>();
    ci = j.at("shape_in").at(1).get<Eigen::Index>();
    ro = j.at("shape_out").at(0).get<Eigen::Index>();
    co = j.at("shape_out").at(1).get<Eigen::Index>();
  } else if (j.contains("dim_in") && j.contains("dim_out")) {
    ri = ci = j.at("dim_in").get<Eigen::Index>();
    ro = co = j.at("dim_out").get<Eigen::Index>();
  } else {
    throw InputError("map object needs dim_in/dim_out or shape_in/shape_out");
  }
  if (ri <= 0 || ci <= 0 || ro <= 0 || co <= 0)
    throw InputError("dimensions must be positive");

  const json& data = j.at("data");
  try {
    if (repr == "superop") {
      Mat M = mat_from_json(data);
      if (M.rows() != ro * co || M.cols() != ri * ci)
        throw InputError("superop matrix shape mismatch");
      return SuperOp(ri, ci, ro, co, std::move(M));
    }
    if (repr == "kraus") {
      if (!data.is_array() || data.empty())
        throw InputError("kraus data must be a nonempty array");
      KrausSet k;
      for (const auto& op : data) {
        Mat S = mat_from_json(op);
        if (S.rows() != ro || S.cols() != ri)
          throw InputError("kraus operator shape mismatch");
        k.ops.push_back(std::move(S));
      }
      return from_kraus(k);
    }
    if (repr == "choi") {
      Mat C = mat_from_json(data);
      if (ri != ci || ro != co) throw InputError("choi requires square spaces");
      if (C.rows() != ri * ro || C.cols() != ri * ro)
        throw InputError("choi matrix shape mismatch");
      return from_choi(ChoiMatrix{ri, ro, std::move(C)});
    }
    if (repr == "schur") {
      Mat mult = mat_from_json(data);
      if (mult.rows() != ri || mult.cols() != ri || ri != ro)
        throw InputError("schur multipliers shape mismatch");
      return schur_map(mult);
    }
    if (repr == "state") {
      Mat D = mat_from_json(data);
      if (D.rows() != ri || D.cols() != ri || ri != ro)
        throw InputError("state matrix shape mismatch");
      return state_map(D);
    }
  } catch (const DimensionMismatch& e) {
    throw InputError(e.what());
  }
  throw InputError("unknown repr: " + repr);
}

json superop_to_json(const SuperOp& phi, const std::string& repr) {
  json j;
  if (phi.square_spaces()) {
    j["dim_in"] = phi.dim_in();
    j["dim_out"] = phi.dim_out();
  } else {
    j["shape_in"] = {phi.rows_in(), phi.cols_in()};
    j["shape_out"] = {phi.rows_out(), phi.cols_out()};
  }
  if (repr == "superop") {
    j["repr"] = "superop";
    j["data"] = mat_to_json(phi.matrix());
    return j;
  }
  if (repr == "choi") {
    j["repr"] = "choi";
    j["data"] = mat_to_json(choi(phi).matrix);
    return j;
  }
  if (repr == "kraus") {
    j["repr"] = "kraus";
    json ops = json::array();
    for (const auto& S : kraus_from_choi(choi(phi)).ops)
      ops.push_back(mat_to_json(S));
    j["data"] = std::move(ops);
    return j;
  }
  if (repr == "schur") {
    auto mult = schur_multipliers(phi);
    if (!mult) throw Error("superop_to_json: map is not a Schur map");
    j["repr"] = "schur";
    j["data"] = mat_to_json(*mult);
    return j;
  }
  throw Error("superop_to_json: unsupported repr " + repr);
}

SuperOp load_superop(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
  try {
    return superop_from_json(j);
  } catch (const json::exception& e) {
    throw InputError("bad map object in " + path + ": " + e.what());
  }
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

json cert_to_json(const PositivityCert& cert) {
  json j;
  j["grid"] = cert.grid;
  json eigs = json::array();
  for (double e : cert.min_eigs)
    if (std::isnan(e))
      eigs.push_back(nullptr);
    else
      eigs.push_back(e);
  j["min_eigs"] = std::move(eigs);
  j["verdict"] = cert.verdict;
  j["failures"] = cert.failures;
  j["certificate"] = "grid-certified";
  j["exact_path"] = cert.exact_path;
  return j;
}

json cnegform_to_json(const CnegForm& form) {
  json j;
  j["s"] = form.s;
  j["Y"] = mat_to_json(form.Y);
  json terms = json::array();
  for (const auto& [lambda, S] : form.terms)
    terms.push_back({{"lambda", lambda}, {"S", mat_to_json(S)}});
  j["terms"] = std::move(terms);
  return j;
}

json qpure_verdict_to_json(const QPureVerdict& v) {
  json j;
  switch (v.tag) {
    case QPureVerdict::Tag::RankOneFaithful:
      j["tag"] = "RankOneFaithful";
      j["D"] = mat_to_json(v.D);
      break;
    case QPureVerdict::Tag::InvertibleSchur:
      j["tag"] = "InvertibleSchur";
      j["U"] = mat_to_json(v.U);
      j["lambdas"] = v.lambdas;
      break;
    case QPureVerdict::Tag::NotQPure:
      j["tag"] = "NotQPure";
      if (v.witness) j["witness"] = superop_to_json(*v.witness);
      if (!v.reason.empty()) j["reason"] = v.reason;
      break;
    case QPureVerdict::Tag::Indeterminate:
      j["tag"] = "Indeterminate";
      j["reason"] = v.reason;
      break;
  }
  return j;
}

}  // namespace qpm
