#pragma once

#include <memory>
#include <string>
#include <vector>

#include "arcbem/io.hpp"
#include "arcbem/krylov.hpp"
#include "arcbem/potential.hpp"

namespace arcbem {

struct GeometrySpec {
  ArcKind kind = ArcKind::flat;
  double angle = kPi / 2;  // v-shape opening
  std::string file;        // custom: CSV of t,x,y
};

enum class RhsKind { plane_wave, laplace, constant, chebyshev };

struct RhsSpec {
  RhsKind kind = RhsKind::plane_wave;
  double angle = 0.0;  // plane-wave direction
  double value = 1.0;  // constant
  int order = 0;       // chebyshev: data T_n(t) (Dirichlet) or U_n(t) (Neumann)
};

struct OutputSpec {
  std::string report, history, density;
};

struct Scenario {
  std::string name = "scenario";
  GeometrySpec geometry;
  Side side = Side::dirichlet;
  double k = 0.0;
  double kL = -1.0;  // when >= 0 overrides k through k = kL / |arc|
  double ppw = 5.0;  // N = round(ppw k |arc|) unless N is set
  int N = 0;
  double beta = 0.0;  // > 0: unweighted P1 on a beta-graded mesh (Dirichlet only)
  RhsSpec rhs;
  PrecondConfig precond;
  GmresOptions solver;
  OutputSpec outputs;
};

// "50pi", "3pi/4", "-pi/2", "2*pi" or a plain number
double parse_quantity(const std::string& text);

// JSON text; numbers for k/kL/angles may be written as "50pi" or "pi/4"
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);

Arc make_arc(const GeometrySpec& g);
double scenario_wavenumber(const Scenario& s, const Arc& arc);
int scenario_mesh_size(const Scenario& s, const Arc& arc, double k);
TraceData scenario_rhs(const Scenario& s, int N, double k);

struct Problem {
  std::shared_ptr<const GalerkinSpace> space;
  double k = 0.0;
  int N = 0;
  MatC A;
  VecC b;
  double assembly_time = 0.0;
};

Problem assemble_problem(const Scenario& s);

struct ScenarioResult {
  Scenario scenario;
  std::shared_ptr<const GalerkinSpace> space;
  double k = 0.0;
  int N = 0;
  VecC density;
  SolveReport report;
  double assembly_time = 0.0, precond_time = 0.0;
  double precond_cost = 0.0;  // multiply-adds per application
};

ScenarioResult solve_problem(const Problem& p, const Scenario& s);
// errors from sub-modules are rethrown with the scenario name prepended
ScenarioResult run_scenario(const Scenario& s);
std::string report_to_json(const ScenarioResult& r);
void write_outputs(const ScenarioResult& r);

struct TableRow {
  std::string table, row, variant;
  int N = 0;
  double k = 0.0;
  std::string reference;  // "8", ">500" or "-"
  int measured = -1;
  bool converged = false;
  bool skipped = false;
  std::string note;
  std::string reference_error;
  double error = -1.0;
  double precond_cost = 0.0;
};

struct TableOptions {
  int max_N = 8000;
  bool unpreconditioned = true;
  int max_iter = 500;
};

const std::vector<std::string>& table_ids();
std::vector<TableRow> iteration_table(const std::string& id, const TableOptions& opt = {});
std::string table_csv(const std::vector<TableRow>& rows);
// preconditioned rows within 2x of the reference count; unpreconditioned rows at least half of it
bool row_within_tolerance(const TableRow& r);

struct ConvergenceSeries {
  std::string norm;
  std::vector<int> N;
  std::vector<double> h, error;
  double slope = 0.0;  // least squares of log(error) on log(h) over the finest four meshes
};

struct ConvergenceStudy {
  std::string id;
  std::vector<ConvergenceSeries> series;
};

// id in {dir-omega, dir-omega3, neu-U2}
ConvergenceStudy convergence_study(const std::string& id, const std::vector<int>& Ns = {32, 64, 128, 256, 512});
std::string convergence_csv(const ConvergenceStudy& c);

struct PadeSweepRow {
  int order = 0;  // 0 means no preconditioner
  int iterations = 0;
  bool converged = false;
};

// spiral Dirichlet, e^{ikx}; scenario supplies kL and solver settings
Scenario pade_sweep_scenario(double kL = 200 * kPi);
std::vector<PadeSweepRow> pade_sensitivity(const Scenario& s, const std::vector<int>& orders);
std::string pade_csv(const std::vector<PadeSweepRow>& rows);

FieldGrid field_map(const Scenario& s, const GridSpec& grid);

struct CompareRow {
  std::string kind;
  double kL = 0.0;
  double beta = 0.0;  // graded study only; 0 for the weighted method
  int N = 0;
  int iterations = 0;
  bool converged = false;
  double cost = 0.0;
  double error = -1.0;  // graded study only
  std::string note;
};

// same assembled system per kL, one solve per kind (standard-sqrt assembles its own unweighted system)
std::vector<CompareRow> compare_preconditioners(const Scenario& base, const std::vector<PrecondKind>& kinds,
                                                const std::vector<double>& kLs);
// S_k lambda = e^{ikx} on the flat segment: unweighted P1 on beta meshes with P'_k versus the weighted method;
// errors in the S_0 energy norm relative to a weighted reference on a refine-times finer mesh
std::vector<CompareRow> graded_study(double k = 10 * kPi, int N = 80, const std::vector<double>& betas = {1, 2, 3, 4, 5},
                                     int refine = 16);
std::string compare_csv(const std::vector<CompareRow>& rows);

}  // namespace arcbem
