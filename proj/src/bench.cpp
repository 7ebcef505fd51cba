#include "arcbem/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "arcbem/quadrature.hpp"

namespace arcbem {

using json = nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string trim(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  return s;
}

double parse_plain(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("cannot read " + what + " from '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("cannot read " + what + " from '" + s + "'");
  return v;
}

// "50pi", "3pi/4", "-pi/2", "2*pi", "1.5"
double parse_real(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw ConfigError(what + " must be a number or a string such as \"50pi\"");
  const std::string s = trim(j.get<std::string>());
  const auto p = s.find("pi");
  if (p == std::string::npos) return parse_plain(s, what);
  std::string pre = s.substr(0, p), post = s.substr(p + 2);
  if (!pre.empty() && pre.back() == '*') pre.pop_back();
  double c = pre.empty() ? 1.0 : pre == "-" ? -1.0 : parse_plain(pre, what);
  double d = 1.0;
  if (!post.empty()) {
    if (post[0] != '/') throw ConfigError("cannot read " + what + " from '" + s + "'");
    d = parse_plain(post.substr(1), what);
  }
  return c * kPi / d;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

std::string rhs_name(RhsKind k) {
  switch (k) {
    case RhsKind::plane_wave: return "plane-wave";
    case RhsKind::laplace: return "laplace";
    case RhsKind::constant: return "constant";
    case RhsKind::chebyshev: return "chebyshev";
  }
  return "plane-wave";
}

RhsKind rhs_from_string(const std::string& s) {
  for (auto k : {RhsKind::plane_wave, RhsKind::laplace, RhsKind::constant, RhsKind::chebyshev})
    if (rhs_name(k) == s) return k;
  throw ConfigError("unknown rhs type: " + s);
}

Side side_from_string(const std::string& s) {
  if (s == "dirichlet") return Side::dirichlet;
  if (s == "neumann") return Side::neumann;
  throw ConfigError("boundary condition must be dirichlet or neumann, got " + s);
}

std::string side_name(Side s) { return s == Side::dirichlet ? "dirichlet" : "neumann"; }

template <class E>
[[noreturn]] void rethrow_with(const std::string& name, const E& e) {
  throw E(name + ": " + e.what());
}

LinearOperator matrix_operator(const MatC& A) {
  const MatC* p = &A;
  return LinearOperator(A.rows(), [p](const VecC& v) { return VecC(*p * v); }, double(A.rows()) * double(A.cols()));
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return s.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

}  // namespace

double parse_quantity(const std::string& text) { return parse_real(json(text), "quantity"); }

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  check_keys(j, {"name", "geometry", "bc", "k", "kL", "ppw", "N", "beta", "rhs", "preconditioner", "solver", "outputs"},
             "scenario");
  Scenario s;
  s.solver.track_true_residual = true;
  try {
    if (j.contains("name")) s.name = j["name"].get<std::string>();
    if (j.contains("geometry")) {
      const json& g = j["geometry"];
      if (g.is_string()) {
        s.geometry.kind = arc_kind_from_string(g.get<std::string>());
      } else {
        check_keys(g, {"kind", "angle", "file"}, "geometry");
        s.geometry.kind = arc_kind_from_string(g.at("kind").get<std::string>());
        if (g.contains("angle")) s.geometry.angle = parse_real(g["angle"], "geometry.angle");
        if (g.contains("file")) s.geometry.file = g["file"].get<std::string>();
      }
    }
    if (j.contains("bc")) s.side = side_from_string(j["bc"].get<std::string>());
    if (j.contains("k") && j.contains("kL")) throw ConfigError("give either k or kL, not both");
    if (j.contains("k")) s.k = parse_real(j["k"], "k");
    if (j.contains("kL")) s.kL = parse_real(j["kL"], "kL");
    if (j.contains("ppw")) s.ppw = parse_real(j["ppw"], "ppw");
    if (j.contains("N")) s.N = j["N"].get<int>();
    if (j.contains("beta")) s.beta = parse_real(j["beta"], "beta");
    if (j.contains("rhs")) {
      const json& r = j["rhs"];
      if (r.is_string()) {
        s.rhs.kind = rhs_from_string(r.get<std::string>());
      } else {
        check_keys(r, {"type", "angle", "value", "order"}, "rhs");
        s.rhs.kind = rhs_from_string(r.at("type").get<std::string>());
        if (r.contains("angle")) s.rhs.angle = parse_real(r["angle"], "rhs.angle");
        if (r.contains("value")) s.rhs.value = parse_real(r["value"], "rhs.value");
        if (r.contains("order")) s.rhs.order = r["order"].get<int>();
      }
    }
    if (j.contains("preconditioner")) {
      const json& p = j["preconditioner"];
      if (p.is_string()) {
        s.precond.kind = precond_kind_from_string(p.get<std::string>());
      } else {
        check_keys(p, {"type", "Np", "theta", "eps"}, "preconditioner");
        if (p.contains("type")) s.precond.kind = precond_kind_from_string(p["type"].get<std::string>());
        if (p.contains("Np")) s.precond.pade_order = p["Np"].get<int>();
        if (p.contains("theta")) s.precond.theta = parse_real(p["theta"], "preconditioner.theta");
        if (p.contains("eps")) s.precond.eps = parse_real(p["eps"], "preconditioner.eps");
      }
    }
    if (j.contains("solver")) {
      const json& v = j["solver"];
      check_keys(v, {"tol", "max_iter", "true_residual"}, "solver");
      if (v.contains("tol")) s.solver.tol = parse_real(v["tol"], "solver.tol");
      if (v.contains("max_iter")) s.solver.max_iter = v["max_iter"].get<int>();
      if (v.contains("true_residual")) s.solver.track_true_residual = v["true_residual"].get<bool>();
    }
    if (j.contains("outputs")) {
      const json& o = j["outputs"];
      check_keys(o, {"report", "history", "density"}, "outputs");
      if (o.contains("report")) s.outputs.report = o["report"].get<std::string>();
      if (o.contains("history")) s.outputs.history = o["history"].get<std::string>();
      if (o.contains("density")) s.outputs.density = o["density"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad scenario field: ") + e.what());
  }
  if (s.N < 0) throw ConfigError("N must be positive");
  if (s.ppw <= 0.0) throw ConfigError("ppw must be positive");
  if (s.k < 0.0) throw ConfigError("k must be nonnegative");
  if (s.precond.pade_order < 1) throw ConfigError("Np must be at least 1");
  if (s.solver.tol <= 0.0 || s.solver.max_iter < 1) throw ConfigError("solver needs tol > 0 and max_iter >= 1");
  if (s.geometry.kind == ArcKind::custom && s.geometry.file.empty())
    throw ConfigError("custom geometry needs a file");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  Scenario s = parse_scenario(ss.str());
  if (s.geometry.kind == ArcKind::custom) {
    namespace fs = std::filesystem;
    fs::path f(s.geometry.file);
    if (f.is_relative()) s.geometry.file = (fs::path(path).parent_path() / f).string();
  }
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["geometry"] = {{"kind", to_string(s.geometry.kind)}};
  if (s.geometry.kind == ArcKind::vshape) j["geometry"]["angle"] = s.geometry.angle;
  if (s.geometry.kind == ArcKind::custom) j["geometry"]["file"] = s.geometry.file;
  j["bc"] = side_name(s.side);
  if (s.kL >= 0.0)
    j["kL"] = s.kL;
  else
    j["k"] = s.k;
  j["ppw"] = s.ppw;
  if (s.N > 0) j["N"] = s.N;
  if (s.beta > 0.0) j["beta"] = s.beta;
  j["rhs"] = {{"type", rhs_name(s.rhs.kind)}};
  if (s.rhs.kind == RhsKind::plane_wave) j["rhs"]["angle"] = s.rhs.angle;
  if (s.rhs.kind == RhsKind::constant) j["rhs"]["value"] = s.rhs.value;
  if (s.rhs.kind == RhsKind::chebyshev) j["rhs"]["order"] = s.rhs.order;
  j["preconditioner"] = {{"type", to_string(s.precond.kind)},
                         {"Np", s.precond.pade_order},
                         {"theta", s.precond.theta}};
  if (s.precond.eps >= 0.0) j["preconditioner"]["eps"] = s.precond.eps;
  j["solver"] = {{"tol", s.solver.tol}, {"max_iter", s.solver.max_iter}, {"true_residual", s.solver.track_true_residual}};
  json o = json::object();
  if (!s.outputs.report.empty()) o["report"] = s.outputs.report;
  if (!s.outputs.history.empty()) o["history"] = s.outputs.history;
  if (!s.outputs.density.empty()) o["density"] = s.outputs.density;
  j["outputs"] = o;
  return j.dump(2);
}

Arc make_arc(const GeometrySpec& g) {
  switch (g.kind) {
    case ArcKind::flat: return make_flat();
    case ArcKind::spiral: return make_spiral();
    case ArcKind::vshape: return make_vshape(g.angle);
    case ArcKind::custom: return load_custom_csv(g.file);
  }
  throw ConfigError("unknown geometry");
}

double scenario_wavenumber(const Scenario& s, const Arc& arc) { return s.kL >= 0.0 ? s.kL / arc.length() : s.k; }

int scenario_mesh_size(const Scenario& s, const Arc& arc, double k) {
  int N = s.N;
  if (N == 0) {
    if (k == 0.0) throw ConfigError("k = 0 needs an explicit N");
    N = std::max(2, int(std::lround(s.ppw * k * arc.length())));
  }
  if (arc.kind() == ArcKind::vshape && s.beta == 0.0 && N % 2 != 0) ++N;
  return N;
}

TraceData scenario_rhs(const Scenario& s, int N, double k) {
  const bool dir = s.side == Side::dirichlet;
  switch (s.rhs.kind) {
    case RhsKind::plane_wave:
      return dir ? plane_wave_trace(k, s.rhs.angle) : plane_wave_normal_derivative(k, s.rhs.angle);
    case RhsKind::laplace: {
      const double e = 1.0 / (double(N) * N), p = dir ? -0.5 : 0.5;
      return [e, p](const Vec2& x, const Vec2&, double) { return cplx(std::pow(x.x() * x.x() + e, p), 0.0); };
    }
    case RhsKind::constant: {
      const double v = s.rhs.value;
      return [v](const Vec2&, const Vec2&, double) { return cplx(v, 0.0); };
    }
    case RhsKind::chebyshev: {
      const int n = s.rhs.order;
      if (n < 0) throw ConfigError("chebyshev rhs needs order >= 0");
      if (dir) return [n](const Vec2&, const Vec2&, double t) { return cplx(chebyshev_T(n, t), 0.0); };
      return [n](const Vec2&, const Vec2&, double t) { return cplx(chebyshev_U(n, t), 0.0); };
    }
  }
  throw ConfigError("unknown rhs");
}

Problem assemble_problem(const Scenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  Arc arc = make_arc(s.geometry);
  Problem p;
  p.k = scenario_wavenumber(s, arc);
  p.N = scenario_mesh_size(s, arc, p.k);
  if (s.beta > 0.0) {
    if (s.side != Side::dirichlet) throw ConfigError("unweighted graded discretization is Dirichlet only");
    auto sp = std::make_shared<const GalerkinSpace>(make_standard_space(arc, p.N, s.beta));
    p.A = assemble_single_layer_standard(*sp, p.k);
    p.space = sp;
  } else if (s.side == Side::dirichlet) {
    auto sp = std::make_shared<const GalerkinSpace>(make_weighted_space(arc, p.N, Weight::inv_omega));
    p.A = assemble_single_layer_weighted(*sp, p.k);
    p.space = sp;
  } else {
    auto sp = std::make_shared<const GalerkinSpace>(make_weighted_space(arc, p.N, Weight::omega));
    p.A = assemble_hypersingular_weighted(*sp, p.k);
    p.space = sp;
  }
  p.b = assemble_rhs(*p.space, scenario_rhs(s, p.N, p.k));
  p.assembly_time = seconds_since(t0);
  return p;
}

ScenarioResult solve_problem(const Problem& p, const Scenario& s) {
  ScenarioResult r;
  r.scenario = s;
  r.space = p.space;
  r.k = p.k;
  r.N = p.N;
  r.assembly_time = p.assembly_time;
  auto t0 = std::chrono::steady_clock::now();
  LinearOperator M = build_preconditioner(*p.space, p.k, s.side, s.precond);
  r.precond_time = seconds_since(t0);
  r.precond_cost = M.cost();
  GmresResult g = gmres(matrix_operator(p.A), p.b, M, s.solver);
  r.density = std::move(g.x);
  r.report = std::move(g.report);
  return r;
}

ScenarioResult run_scenario(const Scenario& s) {
  try {
    Problem p = assemble_problem(s);
    return solve_problem(p, s);
  } catch (const GeometryError& e) {
    rethrow_with(s.name, e);
  } catch (const NumericalError& e) {
    rethrow_with(s.name, e);
  } catch (const ConfigError& e) {
    rethrow_with(s.name, e);
  } catch (const Error& e) {
    rethrow_with(s.name, e);
  }
}

std::string report_to_json(const ScenarioResult& r) {
  json j;
  j["scenario"] = json::parse(scenario_to_json(r.scenario));
  j["k"] = r.k;
  j["kL"] = r.k * r.space->arc().length();
  j["N"] = r.N;
  j["dof_count"] = r.report.dof_count;
  j["iterations"] = r.report.iterations;
  j["converged"] = r.report.converged;
  j["breakdown"] = r.report.breakdown;
  j["final_residual"] = r.report.history.empty() ? 0.0 : r.report.history.back();
  j["true_residual"] = r.report.true_residual;
  j["relative_residual_history"] = r.report.history;
  if (!r.report.true_history.empty()) j["true_residual_history"] = r.report.true_history;
  j["tol"] = r.report.tol;
  j["max_iter"] = r.report.max_iter;
  j["wall_time"] = r.report.wall_time;
  j["assembly_time"] = r.assembly_time;
  j["precond_time"] = r.precond_time;
  j["precond_cost"] = r.precond_cost;
  return j.dump(2);
}

void write_outputs(const ScenarioResult& r) {
  const auto& o = r.scenario.outputs;
  if (!o.report.empty()) write_text_atomic(o.report, report_to_json(r) + "\n");
  if (!o.history.empty()) write_history_csv(o.history, r.report);
  if (!o.density.empty()) write_density_csv(o.density, *r.space, r.density);
}

// ---------------------------------------------------------------- tables

namespace {

struct RowDef {
  std::string label;
  double kL;  // < 0: Laplace row with explicit N
  int N;
  std::string ref_a, ref_b;
};

constexpr double P = kPi;

const std::map<std::string, std::vector<RowDef>>& row_defs() {
  static const std::map<std::string, std::vector<RowDef>> defs = {
      {"laplace-dir",
       {{"N=500", -1, 500, "8", "79"},
        {"N=2000", -1, 2000, "8", "128"},
        {"N=8000", -1, 8000, "7", "218"},
        {"N=32000", -1, 32000, "8", "347"}}},
      {"laplace-neu",
       {{"N=500", -1, 500, "5", "333"},
        {"N=2000", -1, 2000, "5", ">500"},
        {"N=8000", -1, 8000, "7", ">500"},
        {"N=32000", -1, 32000, "6", ">500"}}},
      {"helm-dir",
       {{"kL=50pi", 50 * P, 0, "8", "88"},
        {"kL=200pi", 200 * P, 0, "10", "123"},
        {"kL=400pi", 400 * P, 0, "13", "145"},
        {"kL=800pi", 800 * P, 0, "16", "155"},
        {"kL=1600pi", 1600 * P, 0, "20", "199"}}},
      {"helm-neu",
       {{"kL=50pi", 50 * P, 0, "10", ">500"},
        {"kL=200pi", 200 * P, 0, "13", ">500"},
        {"kL=400pi", 400 * P, 0, "14", ">500"},
        {"kL=800pi", 800 * P, 0, "18", "-"},
        {"kL=1600pi", 1600 * P, 0, "25", "-"}}},
      {"spiral-dir",
       {{"kL=50pi", 50 * P, 0, "19", "93"},
        {"kL=200pi", 200 * P, 0, "24", "136"},
        {"kL=400pi", 400 * P, 0, "27", "160"},
        {"kL=800pi", 800 * P, 0, "30", "190"},
        {"kL=1600pi", 1600 * P, 0, "32", "217"}}},
      {"spiral-neu",
       {{"kL=50pi", 50 * P, 0, "22", ">500"},
        {"kL=200pi", 200 * P, 0, "31", ">500"},
        {"kL=400pi", 400 * P, 0, "34", ">500"},
        {"kL=800pi", 800 * P, 0, "35", "-"},
        {"kL=1600pi", 1600 * P, 0, "42", "-"}}},
      {"vshape-dir",
       {{"kL=50pi", 50 * P, 0, "9", "97"},
        {"kL=200pi", 200 * P, 0, "10", "157"},
        {"kL=400pi", 400 * P, 0, "11", "190"},
        {"kL=800pi", 800 * P, 0, "14", "231"},
        {"kL=1600pi", 1600 * P, 0, "18", "-"}}},
      {"calderon-dir",
       {{"kL=50pi", 50 * P, 0, "15", "8"},
        {"kL=200pi", 200 * P, 0, "15", "10"},
        {"kL=400pi", 400 * P, 0, "15", "13"},
        {"kL=800pi", 800 * P, 0, "15", "16"}}},
      {"calderon-neu",
       {{"kL=50pi", 50 * P, 0, "15", "10"},
        {"kL=200pi", 200 * P, 0, "16", "13"},
        {"kL=400pi", 400 * P, 0, "17", "15"},
        {"kL=800pi", 800 * P, 0, "17", "18"}}},
  };
  return defs;
}

Scenario table_scenario(const std::string& id, const RowDef& d, const TableOptions& opt) {
  Scenario s;
  s.name = id + " " + d.label;
  s.solver.max_iter = opt.max_iter;
  s.solver.track_true_residual = false;
  s.side = id.ends_with("-neu") ? Side::neumann : Side::dirichlet;
  if (id.starts_with("laplace")) {
    s.k = 0.0;
    s.N = d.N;
    s.rhs.kind = RhsKind::laplace;
    return s;
  }
  s.kL = d.kL;
  if (id.starts_with("helm")) s.rhs.angle = s.side == Side::dirichlet ? 0.0 : kPi / 4;
  if (id.starts_with("spiral")) s.geometry.kind = ArcKind::spiral;
  if (id.starts_with("vshape")) {
    s.geometry.kind = ArcKind::vshape;
    s.geometry.angle = kPi / 2;
    s.rhs.angle = kPi / 2;
  }
  if (id.starts_with("calderon")) s.rhs.angle = kPi / 4;
  return s;
}

TableRow make_row(const std::string& id, const std::string& label, const std::string& variant, const std::string& reference) {
  TableRow r;
  r.table = id;
  r.row = label;
  r.variant = variant;
  r.reference = reference;
  return r;
}

void fill(TableRow& r, const ScenarioResult& res) {
  r.N = res.N;
  r.k = res.k;
  r.measured = res.report.iterations;
  r.converged = res.report.converged;
  r.precond_cost = res.precond_cost;
}

int planned_N(const Scenario& s) {
  Arc arc = make_arc(s.geometry);
  return scenario_mesh_size(s, arc, scenario_wavenumber(s, arc));
}

std::vector<TableRow> run_rows(const std::string& id, const TableOptions& opt) {
  std::vector<TableRow> out;
  const bool calderon = id.starts_with("calderon");
  for (const RowDef& d : row_defs().at(id)) {
    Scenario s = table_scenario(id, d, opt);
    const std::string va = calderon ? "calderon" : "sqrt", vb = calderon ? "sqrt" : "none";
    TableRow a = make_row(id, d.label, va, d.ref_a), b = make_row(id, d.label, vb, d.ref_b);
    const int N = planned_N(s);
    a.N = b.N = N;
    const bool want_b = calderon || opt.unpreconditioned;
    if (N > opt.max_N) {
      a.skipped = b.skipped = true;
      a.note = b.note = "skipped: exceeds desk scale";
      out.push_back(a);
      if (want_b) out.push_back(b);
      continue;
    }
    Problem p = assemble_problem(s);
    s.precond.kind = calderon ? PrecondKind::calderon : PrecondKind::sqrt;
    fill(a, solve_problem(p, s));
    out.push_back(a);
    if (!want_b) continue;
    if (d.ref_b == "-") {
      b.skipped = true;
      b.note = "skipped: not reported";
    } else {
      s.precond.kind = calderon ? PrecondKind::sqrt : PrecondKind::none;
      fill(b, solve_problem(p, s));
    }
    out.push_back(b);
  }
  return out;
}

std::vector<TableRow> vshape_refine(const TableOptions& opt) {
  struct Col {
    std::string name;
    double theta;  // 0: flat
    std::vector<std::string> reference;
  };
  const std::vector<Col> cols = {{"flat", 0.0, {"8", "7", "7", "7", "7", "7"}},
                                 {"theta=3pi/4", 3 * kPi / 4, {"9", "8", "8", "8", "8", "8"}},
                                 {"theta=pi/2", kPi / 2, {"10", "9", "10", "10", "9", "10"}},
                                 {"theta=pi/6", kPi / 6, {"17", "17", "17", "17", "17", "17"}}};
  const std::vector<double> ratios = {2.5, 5, 7.5, 10, 12.5, 15};
  const double kL = 50.0;
  std::vector<TableRow> out;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    for (const Col& c : cols) {
      Scenario s;
      s.name = "vshape-refine " + c.name;
      s.kL = kL;
      s.N = int(std::lround(ratios[i] * kL));
      s.precond.pade_order = 60;
      s.rhs.angle = kPi / 2;
      s.solver.max_iter = opt.max_iter;
      s.solver.track_true_residual = false;
      if (c.theta > 0.0) {
        s.geometry.kind = ArcKind::vshape;
        s.geometry.angle = c.theta;
      }
      TableRow r = make_row("vshape-refine", "N/kL=" + fmt(ratios[i]), c.name, c.reference[i]);
      fill(r, run_scenario(s));
      out.push_back(r);
    }
  }
  return out;
}

std::vector<TableRow> graded_rows() {
  const std::vector<std::string> its = {"10", "12", "13", "17", "21"};
  const std::vector<std::string> errs = {"0.088", "0.020", "0.0066", "0.0036", "0.0030"};
  std::vector<TableRow> out;
  for (const CompareRow& c : graded_study()) {
    const bool w = c.beta == 0.0;
    const int i = w ? -1 : int(c.beta) - 1;
    TableRow r = make_row("graded-compare", w ? "weighted" : "beta=" + fmt(c.beta), c.kind, w ? "7" : its[i]);
    r.reference_error = w ? "2.2e-5" : errs[i];
    r.N = c.N;
    r.k = 10 * kPi;
    r.measured = c.iterations;
    r.converged = c.converged;
    r.error = c.error;
    r.precond_cost = c.cost;
    r.note = c.note;
    out.push_back(r);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& table_ids() {
  static const std::vector<std::string> ids = {"laplace-dir", "laplace-neu",  "helm-dir",     "helm-neu",
                                               "spiral-dir",  "spiral-neu",   "vshape-dir",   "vshape-refine",
                                               "calderon-dir", "calderon-neu", "graded-compare"};
  return ids;
}

std::vector<TableRow> iteration_table(const std::string& id, const TableOptions& opt) {
  if (std::find(table_ids().begin(), table_ids().end(), id) == table_ids().end())
    throw ConfigError("unknown table id: " + id);
  if (id == "vshape-refine") return vshape_refine(opt);
  if (id == "graded-compare") return graded_rows();
  return run_rows(id, opt);
}

bool row_within_tolerance(const TableRow& r) {
  if (r.skipped || r.reference == "-") return true;
  if (r.reference.starts_with(">")) {
    const int bound = std::stoi(r.reference.substr(1));
    return !r.converged || 2 * r.measured >= bound;
  }
  const int reference = std::stoi(r.reference);
  if (r.variant == "none") return 2 * r.measured >= reference;
  return r.converged && r.measured <= 2 * reference;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream s;
  s << "table,row,variant,N,k,reference_iterations,measured_iterations,converged,status,reference_error,measured_error,"
       "precond_cost\n";
  for (const TableRow& r : rows) {
    std::string status = r.skipped ? r.note : row_within_tolerance(r) ? "ok" : "outside tolerance";
    if (!r.skipped && !r.note.empty()) status += "; " + r.note;
    s << r.table << ',' << r.row << ',' << r.variant << ',' << r.N << ',' << fmt(r.k, 10) << ',' << r.reference << ','
      << (r.skipped ? std::string() : std::to_string(r.measured)) << ',' << (r.skipped ? "" : r.converged ? "1" : "0")
      << ',' << csv_field(status) << ',' << r.reference_error << ',' << (r.error >= 0.0 ? fmt(r.error, 4) : "") << ','
      << (r.skipped ? "" : fmt(r.precond_cost, 8)) << '\n';
  }
  return s.str();
}

// ---------------------------------------------------------------- convergence

namespace {

// Chebyshev coefficients (in T_n(t), t = -cos a) of sin(p a) on [0, pi], p odd; only even n are nonzero
std::vector<double> sine_in_chebyshev(int p, int terms) {
  std::vector<double> c(terms, 0.0);
  for (int n = 0; n < terms; n += 2) c[n] = (n == 0 ? 1.0 : 2.0) / kPi * 2.0 * p / double(p * p - n * n);
  return c;
}

double fitted_slope(const std::vector<double>& h, const std::vector<double>& e) {
  const std::size_t m = std::min<std::size_t>(4, h.size());
  const std::size_t s0 = h.size() - m;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = s0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

VecC direct_solve(const MatC& A, const VecC& b) { return DenseLU(A).solve(b); }

}  // namespace

ConvergenceStudy convergence_study(const std::string& id, const std::vector<int>& Ns) {
  if (id != "dir-omega" && id != "dir-omega3" && id != "neu-U2") throw ConfigError("unknown convergence case: " + id);
  if (Ns.size() < 2) throw ConfigError("convergence study needs at least two meshes");
  ConvergenceStudy out;
  out.id = id;
  const Arc arc = make_flat();
  const auto& g = gauss_legendre(16);

  if (id == "neu-U2") {
    ConvergenceSeries l2{"L2_omega", {}, {}, {}, 0.0}, u1{"U1", {}, {}, {}, 0.0};
    auto exact = [](double t) { return 2.0 / 3.0 * (4.0 * t * t - 1.0); };
    auto dexact = [](double t) { return 2.0 / 3.0 * 8.0 * t; };
    for (int N : Ns) {
      GalerkinSpace sp = make_weighted_space(arc, N, Weight::omega);
      VecC b = assemble_rhs(sp, [](const Vec2&, const Vec2&, double t) { return cplx(chebyshev_U(2, t), 0.0); });
      VecC c = direct_solve(assemble_hypersingular_weighted(sp, 0.0), b);
      double e2 = 0.0, e1 = 0.0;
      for (int a = 0; a < sp.panels(); ++a) {
        auto d = sp.dofs(a);
        for (std::size_t q = 0; q < g.x.size(); ++q) {
          PanelPoint p = sp.sample(a, g.x[q]);
          const double w = g.w[q] * p.jac;
          const cplx v = p.phi[0] * c(d[0]) + p.phi[1] * c(d[1]);
          const cplx dv = p.dphi[0] * c(d[0]) + p.dphi[1] * c(d[1]);
          const cplx e = v - exact(p.t), de = dv - dexact(p.t);
          // |e|^2 omega dt = |e|^2 sin^2 da;  d(sin a e)/da = cos a e + sin^2 a de/dt
          e2 += w * std::norm(e) * p.sin_a * p.sin_a;
          e1 += w * std::norm(p.cos_a * e + p.sin_a * p.sin_a * de);
        }
      }
      for (auto* s : {&l2, &u1}) {
        s->N.push_back(N);
        s->h.push_back(kPi / N);
      }
      l2.error.push_back(std::sqrt(e2));
      u1.error.push_back(std::sqrt(e1));
    }
    l2.slope = fitted_slope(l2.h, l2.error);
    u1.slope = fitted_slope(u1.h, u1.error);
    out.series = {l2, u1};
    return out;
  }

  // alpha = sin a or sin^3 a = (3 sin a - sin 3a)/4, data u = sum sigma_n c_n T_n
  const int terms = 20000;
  std::vector<double> c1 = sine_in_chebyshev(1, terms), coef(terms);
  if (id == "dir-omega") {
    coef = c1;
  } else {
    std::vector<double> c3 = sine_in_chebyshev(3, terms);
    for (int n = 0; n < terms; ++n) coef[n] = 0.75 * c1[n] - 0.25 * c3[n];
  }
  ChebyshevSeries data;
  data.coeffs.resize(terms);
  for (int n = 0; n < terms; ++n) data.coeffs[n] = coef[n] * (n == 0 ? 0.5 * std::log(2.0) : 0.5 / n);
  const bool cube = id == "dir-omega3";
  auto exact = [cube](double sa) { return cube ? sa * sa * sa : sa; };
  ConvergenceSeries s{"L2_inv_omega", {}, {}, {}, 0.0};
  for (int N : Ns) {
    GalerkinSpace sp = make_weighted_space(arc, N, Weight::inv_omega);
    VecC b = assemble_rhs(sp, [&data](const Vec2&, const Vec2&, double t) { return data(t); });
    VecC c = direct_solve(assemble_single_layer_weighted(sp, 0.0), b);
    double e2 = 0.0;
    for (int a = 0; a < sp.panels(); ++a) {
      auto d = sp.dofs(a);
      for (std::size_t q = 0; q < g.x.size(); ++q) {
        PanelPoint p = sp.sample(a, g.x[q]);
        const cplx v = p.phi[0] * c(d[0]) + p.phi[1] * c(d[1]);
        e2 += g.w[q] * p.jac * std::norm(v - exact(p.sin_a));
      }
    }
    s.N.push_back(N);
    s.h.push_back(kPi / N);
    s.error.push_back(std::sqrt(e2));
  }
  s.slope = fitted_slope(s.h, s.error);
  out.series = {s};
  return out;
}

std::string convergence_csv(const ConvergenceStudy& c) {
  std::ostringstream s;
  s << "case,norm,N,h,error,local_slope,fitted_slope\n";
  for (const auto& se : c.series)
    for (std::size_t i = 0; i < se.N.size(); ++i) {
      s << c.id << ',' << se.norm << ',' << se.N[i] << ',' << fmt(se.h[i], 10) << ',' << fmt(se.error[i], 10) << ',';
      if (i > 0) s << fmt(std::log(se.error[i] / se.error[i - 1]) / std::log(se.h[i] / se.h[i - 1]), 6);
      s << ',' << fmt(se.slope, 6) << '\n';
    }
  return s.str();
}

// ---------------------------------------------------------------- Pade sweep, field map

Scenario pade_sweep_scenario(double kL) {
  Scenario s;
  s.name = "pade-sweep";
  s.geometry.kind = ArcKind::spiral;
  s.kL = kL;
  s.solver.track_true_residual = false;
  return s;
}

std::vector<PadeSweepRow> pade_sensitivity(const Scenario& s, const std::vector<int>& orders) {
  if (s.side != Side::dirichlet) throw ConfigError("Pade sweep is defined for the Dirichlet problem");
  Problem p = assemble_problem(s);
  std::vector<PadeSweepRow> out;
  for (int order : orders) {
    if (order < 0) throw ConfigError("Pade order must be nonnegative");
    Scenario v = s;
    v.precond.kind = order == 0 ? PrecondKind::none : PrecondKind::sqrt;
    if (order > 0) v.precond.pade_order = order;
    ScenarioResult r = solve_problem(p, v);
    out.push_back({order, r.report.iterations, r.report.converged});
  }
  return out;
}

std::string pade_csv(const std::vector<PadeSweepRow>& rows) {
  std::ostringstream s;
  s << "Np,iterations,converged\n";
  for (const auto& r : rows) s << r.order << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
  return s.str();
}

FieldGrid field_map(const Scenario& s, const GridSpec& grid) {
  if (s.rhs.kind != RhsKind::plane_wave) throw ConfigError("field map needs a plane-wave right-hand side");
  ScenarioResult r = run_scenario(s);
  return evaluate_field(*r.space, r.density, r.k, s.side, s.rhs.angle, grid);
}

// ---------------------------------------------------------------- comparisons

std::vector<CompareRow> compare_preconditioners(const Scenario& base, const std::vector<PrecondKind>& kinds,
                                                const std::vector<double>& kLs) {
  std::vector<CompareRow> out;
  for (double kL : kLs) {
    Scenario s = base;
    s.kL = kL;
    s.N = 0;
    s.beta = 0.0;
    std::optional<Problem> weighted;
    for (PrecondKind kind : kinds) {
      CompareRow row;
      row.kind = to_string(kind);
      row.kL = kL;
      Scenario v = s;
      v.precond.kind = kind;
      ScenarioResult r;
      try {
        if (kind == PrecondKind::standard_sqrt) {
          v.beta = base.beta > 0.0 ? base.beta : 1.0;
          row.beta = v.beta;
          r = solve_problem(assemble_problem(v), v);
        } else {
          if (!weighted) weighted = assemble_problem(s);
          r = solve_problem(*weighted, v);
        }
      } catch (const NumericalError& e) {
        row.note = e.what();
        out.push_back(row);
        continue;
      }
      row.N = r.N;
      row.iterations = r.report.iterations;
      row.converged = r.report.converged;
      row.cost = r.precond_cost;
      out.push_back(row);
    }
  }
  return out;
}

namespace {

// S_0 energy of lambda = f / omega on the flat segment, f given in a (t = -cos a);
// S_0 (T_n / omega) = sigma_n T_n with sigma_0 = ln2/2, sigma_n = 1/(2n)
double s0_energy(const std::function<cplx(double)>& f, std::vector<double> breaks, int nmax) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const auto& g = gauss_legendre(16);
  std::vector<cplx> c(nmax, 0.0);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a0 = breaks[i], a1 = breaks[i + 1];
    if (a1 <= a0) continue;
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      const double a = a0 + (a1 - a0) * g.x[q];
      const cplx v = f(a) * (g.w[q] * (a1 - a0));
      const double ca = std::cos(a);
      double cm = ca, cn = 1.0;  // cos((n-1)a) at n = 0 is cos(a)
      for (int n = 0; n < nmax; ++n) {
        c[n] += v * cn;
        const double next = 2.0 * ca * cn - cm;
        cm = cn;
        cn = next;
      }
    }
  }
  double e = 0.5 * std::log(2.0) * kPi * std::norm(c[0] / kPi);
  for (int n = 1; n < nmax; ++n) e += 0.5 / n * 0.5 * kPi * std::norm(2.0 * c[n] / kPi);
  return e;
}

std::vector<double> alpha_breaks(const GalerkinSpace& sp) {
  std::vector<double> b;
  for (double t : sp.mesh().t) b.push_back(std::acos(std::clamp(-t, -1.0, 1.0)));
  return b;
}

}  // namespace

std::vector<CompareRow> graded_study(double k, int N, const std::vector<double>& betas, int refine) {
  if (refine < 2) throw ConfigError("reference refinement must be at least 2");
  const Arc arc = make_flat();
  const TraceData u = plane_wave_trace(k, 0.0);
  GmresOptions opt;

  GalerkinSpace ref = make_weighted_space(arc, refine * N, Weight::inv_omega);
  const VecC cref = direct_solve(assemble_single_layer_weighted(ref, k), assemble_rhs(ref, u));
  auto ref_alpha = [&](double a) { return ref.evaluate(cref, -std::cos(a)); };
  const int nmax = 4 * refine * N;
  const std::vector<double> ref_breaks = alpha_breaks(ref);
  const double ref_energy = s0_energy(ref_alpha, ref_breaks, nmax);

  std::vector<CompareRow> out;
  for (double beta : betas) {
    CompareRow row;
    row.kind = "standard-sqrt";
    row.kL = k * arc.length();
    row.beta = beta;
    row.N = N;
    GalerkinSpace sp = make_standard_space(arc, N, beta);
    MatC A = assemble_single_layer_standard(sp, k);
    VecC b = assemble_rhs(sp, u);
    LinearOperator M = LinearOperator::identity(A.rows());
    try {
      M = build_standard_sqrt_preconditioner(sp, k);
    } catch (const NumericalError& e) {
      row.kind = "none";
      row.note = std::string("near-singular Gram matrix: ") + e.what();
    }
    GmresResult r = gmres(matrix_operator(A), b, M, opt);
    row.iterations = r.report.iterations;
    row.converged = r.report.converged;
    row.cost = M.cost();
    // omega lambda_h - alpha_ref, omega = sqrt(1 - t^2) on the flat segment
    auto diff = [&](double a) { return std::sin(a) * sp.evaluate(r.x, -std::cos(a)) - ref_alpha(a); };
    std::vector<double> br = ref_breaks, own = alpha_breaks(sp);
    br.insert(br.end(), own.begin(), own.end());
    row.error = std::sqrt(s0_energy(diff, br, nmax) / ref_energy);
    out.push_back(row);
  }

  CompareRow row;
  row.kind = "sqrt";
  row.kL = k * arc.length();
  row.N = N;
  GalerkinSpace sp = make_weighted_space(arc, N, Weight::inv_omega);
  MatC A = assemble_single_layer_weighted(sp, k);
  LinearOperator M = build_dirichlet_preconditioner(sp, k);
  GmresResult r = gmres(matrix_operator(A), assemble_rhs(sp, u), M, opt);
  row.iterations = r.report.iterations;
  row.converged = r.report.converged;
  row.cost = M.cost();
  auto diff = [&](double a) { return sp.evaluate(r.x, -std::cos(a)) - ref_alpha(a); };
  row.error = std::sqrt(s0_energy(diff, ref_breaks, nmax) / ref_energy);
  out.push_back(row);
  return out;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream s;
  s << "kind,kL,beta,N,iterations,converged,precond_cost,error,note\n";
  for (const auto& r : rows)
    s << r.kind << ',' << fmt(r.kL, 10) << ',' << (r.beta > 0.0 ? fmt(r.beta) : "") << ',' << r.N << ','
      << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << fmt(r.cost, 8) << ','
      << (r.error >= 0.0 ? fmt(r.error, 4) : "") << ',' << csv_field(r.note) << '\n';
  return s.str();
}

}  // namespace arcbem
