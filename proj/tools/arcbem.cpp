#include <CLI11.hpp>
#include <cmath>
#include <iostream>

#include "arcbem/bench.hpp"

using namespace arcbem;

namespace {

constexpr int kAssertFailed = 2;
constexpr int kModuleError = 3;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> quantities(const std::string& s) {
  std::vector<double> v;
  for (const auto& x : split(s, ',')) v.push_back(parse_quantity(x));
  return v;
}

std::vector<int> integers(const std::string& s) {
  std::vector<int> v;
  for (const auto& x : split(s, ',')) v.push_back(int(std::lround(parse_quantity(x))));
  return v;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty())
    std::cout << text;
  else
    write_text_atomic(out, text);
}

int report_failures(const std::vector<std::string>& failures) {
  for (const auto& f : failures) std::cerr << "assertion failed: " << f << '\n';
  return failures.empty() ? 0 : kAssertFailed;
}

int cmd_solve(const std::string& file) {
  Scenario s = load_scenario(file);
  ScenarioResult r = run_scenario(s);
  write_outputs(r);
  if (s.outputs.report.empty()) std::cout << report_to_json(r) << '\n';
  std::vector<std::string> fail;
  const auto& h = r.report.history;
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] > h[i - 1] * (1.0 + 1e-10)) fail.push_back("residual history increases at iteration " + std::to_string(i));
  if (r.report.converged && r.report.true_residual > 100.0 * r.report.tol)
    fail.push_back("unpreconditioned residual " + std::to_string(r.report.true_residual) + " exceeds 100 tol");
  return report_failures(fail);
}

int cmd_table(const std::string& id, const TableOptions& opt, const std::string& out) {
  auto rows = iteration_table(id, opt);
  emit(table_csv(rows), out);
  std::vector<std::string> fail;
  for (const auto& r : rows)
    if (!row_within_tolerance(r))
      fail.push_back(id + " " + r.row + " " + r.variant + ": measured " + std::to_string(r.measured) + ", reference " +
                     r.reference);
  return report_failures(fail);
}

int cmd_converge(const std::string& id, const std::string& Ns, const std::string& out) {
  ConvergenceStudy c = Ns.empty() ? convergence_study(id) : convergence_study(id, integers(Ns));
  emit(convergence_csv(c), out);
  std::vector<std::string> fail;
  for (const auto& s : c.series) {
    double want = 2.0, tol = 0.2;
    if (id == "dir-omega") want = 1.5, tol = 0.15;
    if (id == "dir-omega3") tol = 0.15;
    if (s.norm == "U1") want = 1.0;
    if (std::abs(s.slope - want) > tol)
      fail.push_back(id + " " + s.norm + " slope " + std::to_string(s.slope) + " not within " + std::to_string(tol) +
                     " of " + std::to_string(want));
  }
  return report_failures(fail);
}

int cmd_pade(const std::string& kL, const std::string& orders, const std::string& out) {
  Scenario s = pade_sweep_scenario(parse_quantity(kL));
  auto rows = pade_sensitivity(s, integers(orders));
  emit(pade_csv(rows), out);
  int i20 = -1, i50 = -1;
  for (const auto& r : rows) {
    if (r.order == 20) i20 = r.iterations;
    if (r.order == 50) i50 = r.iterations;
  }
  std::vector<std::string> fail;
  if (i20 >= 0 && i50 >= 0 && std::abs(i20 - i50) > 2)
    fail.push_back("Np=20 and Np=50 differ by " + std::to_string(std::abs(i20 - i50)) + " iterations");
  return report_failures(fail);
}

int cmd_field(const std::string& file, const std::string& grid, const std::string& format, const std::string& out) {
  Scenario s = load_scenario(file);
  auto g = split(grid, ',');
  if (g.size() != 6) throw ConfigError("--grid expects x0,x1,y0,y1,nx,ny");
  GridSpec spec;
  spec.x0 = parse_quantity(g[0]);
  spec.x1 = parse_quantity(g[1]);
  spec.y0 = parse_quantity(g[2]);
  spec.y1 = parse_quantity(g[3]);
  spec.nx = int(std::lround(parse_quantity(g[4])));
  spec.ny = int(std::lround(parse_quantity(g[5])));
  FieldGrid f = field_map(s, spec);
  if (format == "csv")
    write_grid_csv(out, f);
  else
    write_grid_binary(out, f);
  return 0;
}

int cmd_compare(const std::string& kinds, const std::string& kLs, bool graded, const std::string& out) {
  std::vector<std::string> fail;
  if (graded) {
    auto rows = graded_study();
    emit(compare_csv(rows), out);
    const CompareRow& w = rows.back();
    const CompareRow* b1 = nullptr;
    const CompareRow* b5 = nullptr;
    for (const auto& r : rows) {
      if (r.beta == 1.0) b1 = &r;
      if (r.beta == 5.0) b5 = &r;
    }
    if (b1 && !(w.error <= b1->error / 100.0))
      fail.push_back("weighted error " + std::to_string(w.error) + " is not below 1/100 of the uniform-mesh error " +
                     std::to_string(b1->error));
    if (b5 && w.iterations > b5->iterations) fail.push_back("weighted method needs more iterations than beta = 5");
    return report_failures(fail);
  }
  std::vector<PrecondKind> ks;
  for (const auto& k : split(kinds, ',')) ks.push_back(precond_kind_from_string(k));
  Scenario base;
  base.name = "compare";
  base.solver.track_true_residual = false;
  auto rows = compare_preconditioners(base, ks, quantities(kLs));
  emit(compare_csv(rows), out);
  int lo = 1 << 30, hi = -1;
  for (const auto& r : rows)
    if (r.kind == "sqrt") {
      lo = std::min(lo, r.iterations);
      hi = std::max(hi, r.iterations);
    }
  if (hi >= 0 && hi - lo > 5) fail.push_back("sqrt iteration spread " + std::to_string(hi - lo) + " exceeds 5");
  return report_failures(fail);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary elements for scattering by open arcs"};
  app.require_subcommand(1);

  std::string file, out, id, Ns, kL = "200pi", orders = "0,1,2,5,10,15,20,30,40,50", grid = "-2,2,-2,2,101,101",
                              format = "bin", kinds = "none,sqrt,sqrt-laplace,calderon", kLs = "50pi,100pi,200pi";
  TableOptions topt;
  bool no_none = false, graded = false;

  auto* solve = app.add_subcommand("solve", "run a scenario file");
  solve->add_option("scenario", file, "scenario JSON")->required()->check(CLI::ExistingFile);

  auto* table = app.add_subcommand("table", "rerun an iteration table");
  table->add_option("id", id, "table id")->required()->check(CLI::IsMember(table_ids()));
  table->add_option("--max-N", topt.max_N, "largest mesh to run");
  table->add_option("--max-iter", topt.max_iter, "GMRES iteration cap");
  table->add_flag("--no-unpreconditioned", no_none, "skip the unpreconditioned column");
  table->add_option("-o,--out", out, "CSV output (default stdout)");

  auto* conv = app.add_subcommand("converge", "mesh convergence study");
  conv->add_option("case", id, "dir-omega, dir-omega3 or neu-U2")
      ->required()
      ->check(CLI::IsMember({"dir-omega", "dir-omega3", "neu-U2"}));
  conv->add_option("--N", Ns, "comma-separated panel counts");
  conv->add_option("-o,--out", out, "CSV output");

  auto* pade = app.add_subcommand("pade-sweep", "iterations against the number of rational terms");
  pade->add_option("--kL", kL, "k times arc length, e.g. 200pi");
  pade->add_option("--orders", orders, "comma-separated Np values, 0 for no preconditioner");
  pade->add_option("-o,--out", out, "CSV output");

  auto* field = app.add_subcommand("field", "scattered and total field on a grid");
  field->add_option("scenario", file, "scenario JSON")->required()->check(CLI::ExistingFile);
  field->add_option("--grid", grid, "x0,x1,y0,y1,nx,ny");
  field->add_option("--format", format, "bin or csv")->check(CLI::IsMember({"bin", "csv"}));
  field->add_option("-o,--out", out, "output file")->required();

  auto* cmp = app.add_subcommand("compare", "preconditioner comparison");
  cmp->add_option("--kinds", kinds, "comma-separated preconditioner types");
  cmp->add_option("--kL", kLs, "comma-separated kL values");
  cmp->add_flag("--graded", graded, "graded-mesh study at k = 10pi, N = 80");
  cmp->add_option("-o,--out", out, "CSV output");

  CLI11_PARSE(app, argc, argv);
  topt.unpreconditioned = !no_none;

  try {
    if (*solve) return cmd_solve(file);
    if (*table) return cmd_table(id, topt, out);
    if (*conv) return cmd_converge(id, Ns, out);
    if (*pade) return cmd_pade(kL, orders, out);
    if (*field) return cmd_field(file, grid, format, out);
    if (*cmp) return cmd_compare(kinds, kLs, graded, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModuleError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModuleError;
  }
  return 0;
}
