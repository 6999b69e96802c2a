#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <chrono>
#include <iostream>
#include <sstream>

#include "qpm/bwsim.hpp"
#include "qpm/cneg.hpp"
#include "qpm/corner.hpp"
#include "qpm/generators.hpp"
#include "qpm/json_io.hpp"
#include "qpm/qorder.hpp"
#include "qpm/qpure.hpp"
#include "qpm/report.hpp"
#include "qpm/superop.hpp"

using namespace qpm;

namespace {

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw InputError("empty grid: " + csv);
  return out;
}

std::vector<double> parse_lambdas(const std::string& csv) { return parse_grid(csv); }

void describe_cert(Report& r, const std::string& prefix,
                   const PositivityCert& cert) {
  r.kv(prefix + " verdict (grid-certified)", cert.verdict);
  r.kv(prefix + " grid points", double(cert.grid.size()));
  r.kv(prefix + " exact path", cert.exact_path);
  if (!cert.failures.empty())
    r.kv(prefix + " first failing t", cert.first_failure());
}

void analyze_into(Report& r, const SuperOp& phi, const std::vector<double>& grid,
                  double tol) {
  if (phi.square_spaces()) {
    r.kv("dim_in", double(phi.dim_in()));
    r.kv("dim_out", double(phi.dim_out()));
  } else {
    r.kv("shape_in", fmt_g(double(phi.rows_in())) + "x" + fmt_g(double(phi.cols_in())));
    r.kv("shape_out", fmt_g(double(phi.rows_out())) + "x" + fmt_g(double(phi.cols_out())));
  }
  if (phi.endomorphism()) {
    r.kv("unital", phi.is_unital());
    r.kv("self_adjoint", phi.is_self_adjoint());
  }
  if (phi.square_spaces()) {
    auto cp = is_completely_positive(phi, tol);
    r.kv("completely_positive", cp.verdict);
    r.kv("min_choi_eigenvalue", cp.min_eig);
  } else {
    // Choi positivity only makes sense for operator maps; for corner blocks
    // report the norm instead.
    r.kv("map_norm", phi.mnorm());
  }
  if (phi.endomorphism()) {
    Eigen::ComplexEigenSolver<Mat> es(phi.matrix());
    std::vector<Complex> eigs(es.eigenvalues().data(),
                              es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(eigs.begin(), eigs.end(), [](const Complex& a, const Complex& b) {
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() < b.imag();
    });
    std::string s;
    for (size_t i = 0; i < eigs.size(); ++i)
      s += (i ? ", " : "") + fmt_complex(eigs[i]);
    r.kv("superop_eigenvalues", s);
    r.kv("negative_eigenvalue", has_negative_eigenvalue(phi));
    if (phi.square_spaces())
      describe_cert(r, "q_positive", is_q_positive(phi, grid, tol));
  }
}

int run(int argc, char** argv) {
  CLI::App app{"certification tool for q-positive maps and boundary weights"};
  app.require_subcommand(1);

  double tol = 1e-10;
  std::string t_grid_csv, seed_str = "1234";

  // analyze
  auto* analyze = app.add_subcommand("analyze", "inspect a map file");
  std::string analyze_path;
  analyze->add_option("path", analyze_path, "JSON map file")->required();
  analyze->add_option("--tol", tol, "CP tolerance");
  analyze->add_option("--t-grid", t_grid_csv, "comma-separated t grid");

  // classify
  auto* classify = app.add_subcommand("classify", "q-pure classification");
  std::string classify_path;
  classify->add_option("path", classify_path, "JSON map file")->required();
  classify->add_option("--tol", tol, "tolerance");

  // corner
  auto* corner = app.add_subcommand("corner", "corner analyses");
  std::string left_path, right_path, cspec_path, u_path, lambdas_csv;
  bool auto_max = false, assert_hyper = false;
  corner->add_option("--left", left_path, "left map JSON");
  corner->add_option("--right", right_path, "right map JSON");
  corner->add_option("--contraction", cspec_path,
                     "corner spec JSON {left_kraus, right_kraus, C}");
  corner->add_flag("--auto-max", auto_max,
                   "maximize the corner norm between rank-one maps");
  corner->add_option("--unitary", u_path, "unitary matrix JSON");
  corner->add_option("--identity-target", lambdas_csv,
                     "lambdas of the Schur map; corner to the identity on C");
  corner->add_flag("--assert-hypermaximal", assert_hyper,
                   "exit 1 unless the corner is hypermaximal");
  corner->add_option("--tol", tol, "tolerance");

  // bwsim
  auto* bwsim = app.add_subcommand("bwsim", "boundary weight tables");
  std::string bw_map, profile = "indicator01", bw_grid_csv = "", b_grid_csv;
  double t_fixed = 0.5;
  bool decay = false;
  bwsim->add_option("--map", bw_map, "unital q-positive map JSON")->required();
  bwsim->add_option("--profile", profile, "weight profile (indicator01)");
  bwsim->add_option("--t-grid", bw_grid_csv, "comma-separated t grid");
  bwsim->add_flag("--decay", decay, "emit the normal-spine decay table");
  bwsim->add_option("--t-fixed", t_fixed, "operand support threshold");
  bwsim->add_option("--b-grid", b_grid_csv, "comma-separated b grid");

  // examples
  auto* examples = app.add_subcommand("examples", "emit named example maps");
  std::string name, out_path = "-", ex_lambdas = "1,-1";
  int ex_dim = 2;
  examples->add_option("name", name,
                       "schur-counterexample | phiu | state-map | "
                       "basischange-corner | identity-corner")
      ->required();
  examples->add_option("--out", out_path, "output file (default stdout)");
  examples->add_option("--lambdas", ex_lambdas, "lambdas for phiu / corners");
  examples->add_option("--dim", ex_dim, "dimension for state-map");
  examples->add_option("--seed", seed_str, "seed echoed into reports");

  CLI11_PARSE(app, argc, argv);

  auto grid_or_default = [&](const std::string& csv) {
    return csv.empty() ? default_t_grid() : parse_grid(csv);
  };

  Report r;

  if (*analyze) {
    r.kv("command", "analyze " + analyze_path);
    SuperOp phi = load_superop(analyze_path);
    analyze_into(r, phi, grid_or_default(t_grid_csv), tol);
    std::cout << r.render();
    return 0;
  }

  if (*classify) {
    r.kv("command", "classify " + classify_path);
    SuperOp phi = load_superop(classify_path);
    auto v = classify_q_pure(phi);
    std::cout << r.render();
    std::cout << qpure_verdict_to_json(v).dump(2) << "\n";
    return 0;
  }

  if (*corner) {
    if (!cspec_path.empty()) {
      nlohmann::json j;
      {
        std::ifstream in(cspec_path);
        if (!in) throw InputError("cannot open " + cspec_path);
        try {
          in >> j;
        } catch (const nlohmann::json::exception& e) {
          throw InputError(std::string("malformed corner spec: ") + e.what());
        }
      }
      CornerSpec spec;
      for (const auto& op : j.at("left_kraus"))
        spec.left_kraus.ops.push_back(mat_from_json(op));
      for (const auto& op : j.at("right_kraus"))
        spec.right_kraus.ops.push_back(mat_from_json(op));
      spec.C = mat_from_json(j.at("C"));
      SuperOp gamma = corner_from_contraction(spec);
      SuperOp phi = from_kraus(spec.left_kraus);
      SuperOp psi = from_kraus(spec.right_kraus);
      r.kv("command", "corner --contraction " + cspec_path);
      r.kv("corner_norm_bound", spectral_norm(spec.C));
      r.kv("is_corner", verify_corner(phi, gamma, psi, tol));
      describe_cert(r, "q_corner", is_q_corner(phi, gamma, psi, default_t_grid(), tol));
      std::cout << r.render();
      return 0;
    }

    if (auto_max) {
      if (left_path.empty() || right_path.empty())
        throw InputError("corner --auto-max needs --left and --right");
      auto recover_state = [](const SuperOp& phi, const char* side) {
        if (phi.numerical_rank() != 1 || !phi.is_unital())
          throw InputError(std::string(side) +
                           " map is not a rank-one unital (state) map");
        const Eigen::Index n = phi.dim_in();
        Mat D(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
          for (Eigen::Index k = 0; k < n; ++k) {
            Mat E = Mat::Zero(n, n);
            E(j, k) = 1.0;
            D(k, j) = phi.apply(E).diagonal().mean();
          }
        return Mat(0.5 * (D + D.adjoint()));
      };
      SuperOp lhs = load_superop(left_path), rhs = load_superop(right_path);
      Mat D1 = recover_state(lhs, "left");
      Mat D2 = recover_state(rhs, "right");
      auto m = max_corner_norm_rank_one(D1, D2);
      r.kv("command", "corner --auto-max");
      r.kv("max_corner_norm", m.value);
      r.kv("faithful_inputs", m.faithful);
      if (D1.rows() != D2.rows() && m.value < 1.0 - 1e-3)
        r.kv("conclusion",
             std::string("corner norms stay below one: the induced "
                         "semigroups are not cocycle conjugate"));
      std::cout << r.render();
      return 0;
    }

    SuperOp phi = SuperOp::identity(1);
    SuperOp gamma = SuperOp::identity(1);
    SuperOp psi = SuperOp::identity(1);
    if (!u_path.empty()) {
      if (left_path.empty()) throw InputError("corner --unitary needs --left");
      phi = load_superop(left_path);
      std::ifstream in(u_path);
      if (!in) throw InputError("cannot open " + u_path);
      nlohmann::json ju;
      try {
        in >> ju;
      } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed unitary: ") + e.what());
      }
      Mat U = mat_from_json(ju);
      gamma = unitary_conjugation_corner(phi, U);
      psi = conjugate_by_unitary(phi, U);
      r.kv("command", "corner --unitary");
    } else if (!lambdas_csv.empty()) {
      auto l = parse_lambdas(lambdas_csv);
      phi = make_invertible_qpure(l);
      gamma = flow_corner_to_identity(l);
      psi = SuperOp::identity(1);
      r.kv("command", "corner --identity-target " + lambdas_csv);
    } else {
      throw InputError(
          "corner needs one of --contraction, --auto-max, --unitary, "
          "--identity-target");
    }

    r.kv("is_corner", verify_corner(phi, gamma, psi, tol));
    auto qc = is_q_corner(phi, gamma, psi, default_t_grid(), tol);
    describe_cert(r, "q_corner", qc);
    bool hyper = false;
    try {
      auto hv = is_hypermaximal_over_resolvent_family(phi, gamma, psi);
      hyper = hv.hypermaximal;
      r.kv("hypermaximal", hv.hypermaximal);
      if (hv.violating_pair)
        r.kv("violating_pair", "t=" + fmt_g(hv.violating_pair->first) +
                                   " s=" + fmt_g(hv.violating_pair->second));
    } catch (const DiagonalsNotQPure&) {
      r.kv("hypermaximal", std::string("not applicable (diagonals not q-pure)"));
    }
    std::cout << r.render();
    if (assert_hyper && !hyper) return 1;
    return 0;
  }

  if (*bwsim) {
    if (profile != "indicator01")
      throw InputError("unsupported profile: " + profile);
    auto spec = WeightProfile::indicator01();
    SuperOp phi = load_superop(bw_map);
    r.kv("command", "bwsim --map " + bw_map + " --profile " + profile);
    r.kv("profile_admissible", profile_admissible(spec));

    if (!decay) {
      std::vector<double> grid;
      if (!bw_grid_csv.empty())
        grid = parse_grid(bw_grid_csv);
      else
        for (double t = 0.01; t < 1.0; t += 0.0999) grid.push_back(t);
      auto rows = gbr_norm_bound(phi, spec, grid);
      Table tb;
      tb.header = {"t", "nu_I", "s_t", "bound", "degenerate"};
      for (const auto& row : rows)
        tb.rows.push_back({fmt_g(row.t), fmt_g(row.nu_I), fmt_g(row.s_t),
                           fmt_g(row.bound), row.degenerate ? "yes" : "no"});
      r.tables.emplace_back("contraction bounds", std::move(tb));
    } else {
      std::vector<double> bg = b_grid_csv.empty()
                                   ? std::vector<double>{0.3, 0.1, 0.03, 0.01}
                                   : parse_grid(b_grid_csv);
      double nu = truncated_values(spec, t_fixed).nu_I;
      Func h{[t_fixed, nu](double x) {
               return Complex(
                   1.0 / std::sqrt((1.0 - std::exp(-x)) * nu), 0.0);
             },
             t_fixed, 1.0};
      GBROperand A{Mat::Identity(phi.dim_in(), phi.dim_in()), h, h};
      auto rows = normal_spine_decay(phi, spec, t_fixed, bg, A);
      Table tb;
      tb.header = {"b", "s_b", "bound", "norm"};
      for (const auto& row : rows)
        tb.rows.push_back(
            {fmt_g(row.b), fmt_g(row.s_b), fmt_g(row.bound), fmt_g(row.norm)});
      r.tables.emplace_back("normal-spine decay", std::move(tb));
    }
    std::cout << r.render();
    return 0;
  }

  if (*examples) {
    nlohmann::json j;
    if (name == "schur-counterexample") {
      Mat mult(2, 2);
      mult << 1.0, Complex(0.5, 0.5), Complex(0.5, -0.5), 1.0;
      j = superop_to_json(schur_map(mult), "schur");
    } else if (name == "phiu") {
      auto l = parse_lambdas(ex_lambdas);
      j = superop_to_json(make_invertible_qpure(l), "schur");
    } else if (name == "state-map") {
      Mat D = Mat::Identity(ex_dim, ex_dim) / double(ex_dim);
      j["dim_in"] = ex_dim;
      j["dim_out"] = ex_dim;
      j["repr"] = "state";
      j["data"] = mat_to_json(D);
    } else if (name == "basischange-corner") {
      Mat U = Mat::Zero(2, 2);
      U(0, 0) = 1.0;
      U(1, 1) = Complex(0.0, 1.0);
      Mat D = 0.5 * Mat::Identity(2, 2);
      j = superop_to_json(unitary_conjugation_corner(state_map(D), U));
    } else if (name == "identity-corner") {
      j = superop_to_json(flow_corner_to_identity(parse_lambdas(ex_lambdas)));
    } else {
      throw InputError("unknown example: " + name);
    }
    if (out_path == "-")
      std::cout << j.dump(2) << "\n";
    else
      save_json(out_path, j);
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  auto start = std::chrono::steady_clock::now();
  int rc;
  try {
    rc = run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    rc = 2;
  } catch (const DimensionMismatch& e) {
    std::cerr << "input error: " << e.what() << "\n";
    rc = 2;
  } catch (const ContractionViolated& e) {
    std::cerr << "input error: " << e.what() << "\n";
    rc = 2;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    rc = 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = 3;
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
  std::cerr << "wall-time: " << ms << " ms\n";
  return rc;
}
