#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "matrix_file.hpp"
#include "minkinv/decomp.hpp"
#include "minkinv/ginv.hpp"
#include "minkinv/numlin.hpp"
#include "minkinv/order.hpp"
#include "minkinv/verify.hpp"

namespace minkinv::cli {

namespace {

using nlohmann::json;

struct Options {
  std::optional<double> tol;
  bool pretty = false;
  bool compact = false;
  std::optional<std::uint64_t> seed;
  std::string kind;
  std::string route = "block";
  std::string relation;
  std::vector<std::string> files;
};

std::string scientific(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

json number(double x) {
  if (std::isfinite(x)) {
    return x;
  }
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

json matrix_json(const CMatrix& M) {
  json rows = json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < M.cols(); ++j) {
      row.push_back({M(i, j).real(), M(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json map_json(const ResidualMap& map) {
  json out = json::object();
  for (const auto& [label, value] : map) {
    out[label] = number(value);
  }
  return out;
}

Tolerances resolve_tolerances(const Options& opt) {
  Tolerances tol;
  if (const char* env = std::getenv("MINKINV_TOL"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double value = std::strtod(env, &end);
    if (end == env || *end != '\0' || !std::isfinite(value) || value <= 0.0) {
      throw InputError(std::string("MINKINV_TOL: not a positive number: ") + env);
    }
    tol.residual_tol = value;
  }
  if (opt.tol) {
    tol.residual_tol = *opt.tol;
  }
  return tol;
}

class Command {
 public:
  Command(std::string name, const Options& opt, std::ostream& out)
      : opt_(opt), out_(out), tol_(resolve_tolerances(opt)) {
    report_["schema"] = 1;
    report_["command"] = std::move(name);
    report_["inputs"] = json::array();
    report_["diagnostics"] = json::array();
    report_["tolerances"] = {{"rank_tol_factor", tol_.rank_tol_factor},
                             {"residual_tol", tol_.residual_tol},
                             {"eig_zero_factor", tol_.eig_zero_factor}};
  }

  const Tolerances& tol() const { return tol_; }
  json& report() { return report_; }

  CMatrix load(const std::string& path) {
    MatrixFile file = read_matrix_file(path);
    report_["inputs"].push_back(file.name);
    return std::move(file.entries);
  }

  void diagnostic(std::string text) { report_["diagnostics"].push_back(std::move(text)); }

  int emit(int status) {
    static constexpr const char* names[] = {"ok", "negative", "input-error", "numerical-error"};
    report_["status"] = names[status];
    out_ << (opt_.pretty ? report_.dump(2) : report_.dump()) << '\n';
    return status;
  }

  /// Reports a clean negative from NotInvertible.
  int negative(const NotInvertible& e) {
    report_["exists"] = false;
    report_["failure"] = std::string(to_string(e.failure()));
    report_["residuals"] = map_json(e.report().residuals);
    report_["index"] = e.report().index;
    diagnostic(e.detail());
    return emit(exit_negative);
  }

 private:
  const Options& opt_;
  std::ostream& out_;
  Tolerances tol_;
  json report_;
};

InverseKind require_kind(const std::string& text) {
  const auto kind = parse_inverse_kind(text);
  if (!kind) {
    throw InputError("unknown --kind " + text);
  }
  return *kind;
}

/// V = diag(phase, U) commutes with G, so every inverse here is covariant
/// under A -> V A V*.
CMatrix metric_unitary(Index n, std::uint64_t seed) {
  Rng rng(seed);
  CMatrix V = CMatrix::Zero(n, n);
  if (n > 0) {
    V(0, 0) = rng.unit_phase();
    V.bottomRightCorner(n - 1, n - 1) = random_unitary(n - 1, rng);
  }
  return V;
}

template <typename F>
void seed_check(Command& cmd, const Options& opt, const CMatrix& A, const CMatrix& X, F&& compute,
                int& status) {
  if (!opt.seed || A.rows() == 0) {
    return;
  }
  const CMatrix V = metric_unitary(A.rows(), *opt.seed);
  const CMatrix moved = compute(V * A * V.adjoint());
  const double gap = (V.adjoint() * moved * V - X).norm();
  const double bound = cmd.tol().residual_tol * residual_scale(A, X);
  cmd.report()["seed_check"] = {{"seed", *opt.seed}, {"gap", number(gap)}, {"bound", bound}};
  if (!(gap <= bound)) {
    cmd.diagnostic("result depends on the similarity seed beyond tolerance");
    status = exit_numerical;
  }
}

InverseReport inverse_by_route(InverseKind kind, const std::string& route, const CMatrix& A,
                               const MinkowskiMetric& G, const Tolerances& tol) {
  if (kind != InverseKind::m_core_ep && route != "block") {
    throw InputError("--route " + route + " applies to --kind m-core-ep only");
  }
  if (route == "block") {
    return compute_inverse(kind, A, G, tol);
  }
  if (route == "drazin") {
    return m_core_ep_via_drazin(A, G, tol);
  }
  if (route == "parts") {
    return m_core_ep_via_parts(A, G, tol);
  }
  InverseReport report;
  report.kind = InverseKind::m_core_ep;
  report.exists = true;
  report.X = oracle_m_core_ep(A, G, tol);
  report.index = matrix_index(A, tol);
  report.residuals = check_axioms_at_index(A, report.X, report.kind, G, report.index, tol);
  report.route = "oracle";
  return report;
}

int cmd_adjoint(const Options& opt, std::ostream& out) {
  Command cmd("adjoint", opt, out);
  const CMatrix A = cmd.load(opt.files.at(0));
  require_square(A, "adjoint");
  cmd.report()["exists"] = true;
  cmd.report()["result"] = matrix_json(minkowski_adjoint(A, MinkowskiMetric(A.rows())));
  return cmd.emit(exit_ok);
}

int cmd_inverse(const Options& opt, std::ostream& out) {
  Command cmd("inverse", opt, out);
  const InverseKind kind = require_kind(opt.kind);
  const CMatrix A = cmd.load(opt.files.at(0));
  require_square(A, "inverse");
  const MinkowskiMetric G(A.rows());
  cmd.report()["kind"] = std::string(to_string(kind));
  try {
    const InverseReport r = inverse_by_route(kind, opt.route, A, G, cmd.tol());
    json& rep = cmd.report();
    rep["exists"] = true;
    rep["result"] = matrix_json(r.X);
    rep["residuals"] = map_json(r.residuals);
    rep["route"] = r.route;
    rep["index"] = r.index;
    rep["route_gaps"] = map_json(r.route_gaps);
    for (const auto& d : r.diagnostics) {
      cmd.diagnostic(d);
    }
    int status = exit_ok;
    seed_check(cmd, opt, A, r.X,
               [&](const CMatrix& M) { return inverse_by_route(kind, opt.route, M, G, cmd.tol()).X; },
               status);
    return cmd.emit(status);
  } catch (const NotInvertible& e) {
    return cmd.negative(e);
  }
}

int cmd_decompose(const Options& opt, std::ostream& out) {
  Command cmd("decompose", opt, out);
  const CMatrix A = cmd.load(opt.files.at(0));
  require_square(A, "decompose");
  const MinkowskiMetric G(A.rows());
  const CoreEPDecomp d = core_ep_decompose(A, cmd.tol());
  const CoreEPParts parts = extract_parts(d);
  const MetricBlocks mb = metric_blocks(d, G, cmd.tol());
  json& rep = cmd.report();
  rep["exists"] = true;
  rep["r"] = d.r;
  rep["k"] = d.k;
  rep["core_ep"] = {{"U", matrix_json(d.U)},
                    {"T", matrix_json(d.T)},
                    {"S", matrix_json(d.S)},
                    {"N", matrix_json(d.N)}};
  rep["parts"] = {{"A1", matrix_json(parts.A1)}, {"A2", matrix_json(parts.A2)}};
  rep["metric_blocks"] = {{"G1", matrix_json(mb.G1)},
                          {"G2", matrix_json(mb.G2)},
                          {"G3", matrix_json(mb.G3)},
                          {"G4", matrix_json(mb.G4)},
                          {"g1_invertible", mb.g1_invertible},
                          {"g1_condition", number(mb.g1_condition)}};
  const Index n = A.rows();
  rep["residuals"] = map_json({{"A1+A2=A", (parts.A1 + parts.A2 - A).norm()},
                               {"U*U=I", (d.U.adjoint() * d.U - CMatrix::Identity(n, n)).norm()}});
  cmd.diagnostic(mb.g1_invertible ? "cond(G1) = " + scientific(mb.g1_condition)
                                  : "G1 singular");
  return cmd.emit(exit_ok);
}

int cmd_m_decompose(const Options& opt, std::ostream& out) {
  Command cmd("m-decompose", opt, out);
  const CMatrix A = cmd.load(opt.files.at(0));
  require_square(A, "m-decompose");
  const MinkowskiMetric G(A.rows());
  try {
    const MCoreEPDecomp d = m_core_ep_decompose(A, G, cmd.tol());
    json& rep = cmd.report();
    rep["exists"] = true;
    rep["k"] = d.k;
    rep["A1hat"] = matrix_json(d.A1hat);
    rep["A2hat"] = matrix_json(d.A2hat);
    rep["residuals"] = map_json(m_core_ep_decomp_residuals(A, d, G));
    int status = exit_ok;
    seed_check(cmd, opt, A, d.A1hat,
               [&](const CMatrix& M) { return m_core_ep_decompose(M, G, cmd.tol()).A1hat; },
               status);
    return cmd.emit(status);
  } catch (const NotInvertible& e) {
    return cmd.negative(e);
  }
}

int cmd_order(const Options& opt, std::ostream& out) {
  Command cmd("order", opt, out);
  const auto relation = parse_order_relation(opt.relation);
  if (!relation) {
    throw InputError("unknown --relation " + opt.relation);
  }
  const CMatrix A = cmd.load(opt.files.at(0));
  const CMatrix B = cmd.load(opt.files.at(1));
  require_square(A, "order");
  require_square(B, "order");
  if (A.rows() != B.rows()) {
    throw DimensionError("order: matrices have different orders");
  }
  try {
    const OrderVerdict v = order_leq(*relation, A, B, MinkowskiMetric(A.rows()), cmd.tol());
    json& rep = cmd.report();
    rep["relation"] = std::string(to_string(v.relation));
    rep["holds"] = v.holds;
    rep["exists"] = true;
    rep["definition"] = std::string(to_string(v.definition));
    rep["characterization"] = std::string(to_string(v.characterization));
    if (v.transfer) {
      rep["transfer"] = std::string(to_string(*v.transfer));
      rep["transfer_residuals"] = map_json(v.transfer_residuals);
    }
    rep["residuals"] = map_json(v.def_residuals);
    rep["char_residuals"] = map_json(v.char_residuals);
    if (!v.consequence_residuals.empty()) {
      rep["consequence_residuals"] = map_json(v.consequence_residuals);
    }
    rep["agree"] = v.agree;
    rep["hypothesis_met"] = v.hypothesis_met;
    rep["scale"] = v.scale;
    for (const auto& d : v.diagnostics) {
      cmd.diagnostic(d);
    }
    if (v.definition == Decision::indeterminate) {
      cmd.diagnostic("definition residuals inside the hysteresis band");
      return cmd.emit(exit_numerical);
    }
    if (!v.agree && v.hypothesis_met) {
      cmd.diagnostic("routes disagree");
      return cmd.emit(exit_numerical);
    }
    return cmd.emit(v.holds ? exit_ok : exit_negative);
  } catch (const NotInvertible& e) {
    return cmd.negative(e);
  }
}

int cmd_exists(const Options& opt, std::ostream& out) {
  Command cmd("exists", opt, out);
  const InverseKind kind = require_kind(opt.kind);
  const CMatrix A = cmd.load(opt.files.at(0));
  require_square(A, "exists");
  cmd.report()["kind"] = std::string(to_string(kind));
  try {
    const InverseReport r = compute_inverse(kind, A, MinkowskiMetric(A.rows()), cmd.tol());
    cmd.report()["exists"] = true;
    cmd.report()["index"] = r.index;
    return cmd.emit(exit_ok);
  } catch (const NotInvertible& e) {
    return cmd.negative(e);
  }
}

int cmd_verify(const Options& opt, std::ostream& out) {
  Command cmd("verify", opt, out);
  const InverseKind kind = require_kind(opt.kind);
  const CMatrix A = cmd.load(opt.files.at(0));
  const CMatrix X = cmd.load(opt.files.at(1));
  require_square(A, "verify");
  const ResidualMap residuals = check_axioms(A, X, kind, MinkowskiMetric(A.rows()), cmd.tol());
  const double bound = cmd.tol().residual_tol * residual_scale(A, X);
  bool satisfied = true;
  for (const auto& [label, value] : residuals) {
    satisfied = satisfied && value <= bound;
  }
  json& rep = cmd.report();
  rep["kind"] = std::string(to_string(kind));
  rep["residuals"] = map_json(residuals);
  rep["bound"] = bound;
  rep["satisfied"] = satisfied;
  return cmd.emit(exit_ok);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Generalized inverses and orders in Minkowski space", "minkinv"};
  app.require_subcommand(1, 1);
  app.add_option("--tol", opt.tol, "residual tolerance (overrides MINKINV_TOL)")
      ->check(CLI::PositiveNumber);
  auto* pretty = app.add_flag("--pretty", opt.pretty, "indented output");
  app.add_flag("--json", opt.compact, "single-line output (default)")->excludes(pretty);
  app.add_option("--seed", opt.seed, "seed for randomized diagnostics");

  const std::vector<std::string> kinds{"minkowski", "group", "drazin", "core-ep", "m-core",
                                       "m-core-ep"};
  auto add = [&app](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    return sub;
  };
  auto* adjoint = add("adjoint", "Minkowski adjoint G A* G");
  adjoint->add_option("file", opt.files, "matrix file")->required()->expected(1);

  auto* inverse = add("inverse", "generalized inverse with residuals");
  inverse->add_option("--kind", opt.kind)->required()->check(CLI::IsMember(kinds));
  inverse->add_option("--route", opt.route)
      ->check(CLI::IsMember({"block", "drazin", "parts", "oracle"}));
  inverse->add_option("file", opt.files, "matrix file")->required()->expected(1);

  auto* decompose = add("decompose", "core-EP decomposition and metric blocks");
  decompose->add_option("file", opt.files, "matrix file")->required()->expected(1);

  auto* m_decompose = add("m-decompose", "m-core-EP decomposition");
  m_decompose->add_option("file", opt.files, "matrix file")->required()->expected(1);

  auto* order = add("order", "decide A <= B");
  order->add_option("--relation", opt.relation)
      ->required()
      ->check(CLI::IsMember({"m-core", "m-core-ep"}));
  order->add_option("files", opt.files, "FILE_A FILE_B")->required()->expected(2);

  auto* exists = add("exists", "existence test");
  exists->add_option("--kind", opt.kind)->required()->check(CLI::IsMember(kinds));
  exists->add_option("file", opt.files, "matrix file")->required()->expected(1);

  auto* verify = add("verify", "residuals of X against the equations of --kind");
  verify->add_option("--kind", opt.kind)->required()->check(CLI::IsMember(kinds));
  verify->add_option("files", opt.files, "FILE_A FILE_X")->required()->expected(2);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "minkinv: " << e.what() << '\n';
    return exit_input;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    if (name == "adjoint") return cmd_adjoint(opt, out);
    if (name == "inverse") return cmd_inverse(opt, out);
    if (name == "decompose") return cmd_decompose(opt, out);
    if (name == "m-decompose") return cmd_m_decompose(opt, out);
    if (name == "order") return cmd_order(opt, out);
    if (name == "exists") return cmd_exists(opt, out);
    return cmd_verify(opt, out);
  } catch (const InputError& e) {
    err << "minkinv: " << e.what() << '\n';
    return exit_input;
  } catch (const DimensionError& e) {
    err << "minkinv: " << e.what() << '\n';
    return exit_input;
  } catch (const std::invalid_argument& e) {
    err << "minkinv: " << e.what() << '\n';
    return exit_input;
  } catch (const NumericalError& e) {
    err << "minkinv: " << e.what() << '\n';
    json rep = {{"schema", 1},
                {"command", name},
                {"status", "numerical-error"},
                {"diagnostics", json::array({e.what()})}};
    out << (opt.pretty ? rep.dump(2) : rep.dump()) << '\n';
    return exit_numerical;
  } catch (const std::exception& e) {
    err << "minkinv: " << e.what() << '\n';
    return exit_numerical;
  }
}

}  // namespace minkinv::cli
