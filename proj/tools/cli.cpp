// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "patchdg/csv.hpp"
#include "patchdg/parallel.hpp"
#include "patchdg/vtk.hpp"

namespace patchdg::cli {

namespace {

namespace fs = std::filesystem;

// A core error tagged with the pipeline stage it came from.
struct StageError {
  std::string stage;
  Error error;
};

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw StageError{name, e};
  }
}

int parse_count(const std::string& text, const std::string& spec) {
  int n = 0;
  std::size_t used = 0;
  try {
    n = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || n < 1) throw ConfigError("bad cell count in mesh spec '" + spec + "'");
  return n;
}

bool is_generator(const std::string& spec) { return spec.starts_with("square:") || spec.starts_with("cube:"); }

// Files are written only after every result is in memory.
using Artifacts = std::map<std::string, std::string>;

void write_artifacts(const std::string& dir, const Artifacts& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  for (const auto& [name, body] : files) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream os(path, std::ios::binary);
    os << body;
    if (!os) throw ConfigError("cannot write " + path.string());
  }
}

struct Manufactured {
  SmoothFunction u;
  std::function<double(const Point&)> f;
};

// sin x sin y on [0, pi]^2 or sin(pi x) sin(pi y) sin(pi z) on the unit cube.
Manufactured manufactured(Domain domain, int p) {
  const ExactSpectrum s = exact_spectrum(domain, p, 1);
  const SmoothFunction e = s.eigenfunction(0);
  // unit amplitude rather than unit L2 norm
  const double c = domain == Domain::SquarePi ? std::numbers::pi / 2.0 : 1.0 / (2.0 * std::sqrt(2.0));
  const double lam = s.values[0];
  Manufactured mf;
  mf.u.value = [e, c](const Point& x) { return c * e.value(x); };
  mf.u.gradient = [e, c](const Point& x) -> Point { return c * e.gradient(x); };
  mf.u.hessian = [e, c](const Point& x) -> Eigen::Matrix3d { return c * e.hessian(x); };
  mf.f = [e, c, lam](const Point& x) { return lam * c * e.value(x); };
  return mf;
}

struct Loaded {
  std::vector<Mesh> meshes;
  std::optional<Domain> domain;
};

Loaded load_meshes(const RunConfig& c) {
  Loaded l;
  if (c.meshes.empty()) throw ConfigError("no mesh given");
  for (std::size_t i = 0; i < c.meshes.size(); ++i) {
    const auto d = domain_of(c.meshes[i]);
    if (i == 0)
      l.domain = d;
    else if (d != l.domain)
      throw ConfigError("all meshes of one run must come from the same domain");
    try {
      l.meshes.push_back(make_mesh(c.meshes[i]));
    } catch (const Error& e) {
      throw ConfigError(c.meshes[i] + ": " + e.what());
    }
  }
  return l;
}

void check_config(const RunConfig& c, const Loaded& l) {
  try {
    c.form.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (c.k < 1) throw ConfigError("--k must be >= 1");
  if (c.target < 1) throw ConfigError("--target is 1-based and must be >= 1");
  if (!(c.tol > 0.0)) throw ConfigError("--tol must be positive");
  if (c.threads < 1) throw ConfigError("--threads must be >= 1");
  const std::size_t n = l.meshes.size();
  const bool needs_exact =
      c.command == Command::Convergence || c.command == Command::Reliable || c.command == Command::Source;
  if (needs_exact && !l.domain) throw ConfigError("this command needs generated meshes (square:n or cube:n)");
  switch (c.command) {
    case Command::Solve:
      if (n != 1) throw ConfigError("solve takes exactly one mesh");
      break;
    case Command::Convergence:
      if (n < 2) throw ConfigError("convergence needs at least two meshes");
      break;
    case Command::Reliable:
      if (n != 2) throw ConfigError("reliable takes exactly two meshes (2h and h)");
      break;
    default:
      break;
  }
  for (const Mesh& m : l.meshes) {
    const int dim = m.dim();
    if (c.patch_size && c.patch_size < required_dim(c.form.m, dim))
      throw ConfigError("--t is below the number of degree-m monomials (" +
                        std::to_string(required_dim(c.form.m, dim)) + ")");
  }
}

std::string eigen_csv(const EigenResult& r) {
  std::ostringstream os;
  CsvWriter w(os);
  w.header({"index", "value", "residual"});
  for (Index i = 0; i < r.size(); ++i) {
    w.cell(static_cast<long long>(i + 1)).cell(r.values[i]).cell(r.residuals[i]);
    w.end_row();
  }
  return os.str();
}

std::string rows_csv(const std::vector<ConvergenceRow>& rows, bool function) {
  std::ostringstream os;
  CsvWriter w(os);
  if (function)
    w.header({"scale", "dofs", "error", "order"});
  else
    w.header({"scale", "value", "error", "order"});
  for (const auto& r : rows) {
    w.cell(r.scale);
    if (function)
      w.cell(static_cast<long long>(r.dofs)).cell(r.function_error);
    else
      w.cell(r.value).cell(r.error);
    const auto& order = function ? r.function_order : r.order;
    if (order)
      w.cell(*order);
    else
      w.empty();
    w.end_row();
  }
  return os.str();
}

LanczosOptions solver_options(const RunConfig& c) {
  LanczosOptions o;
  o.tol = c.tol;
  o.seed = c.seed;
  return o;
}

void cmd_solve(const RunConfig& c, Loaded& l, std::ostream& log, Artifacts& out) {
  const Discretization disc = stage("reconstruction", [&] { return discretize(l.meshes[0], c.form.m, c.patch_size); });
  const SystemMatrices sys = stage("assembly", [&] { return assemble_system(disc, c.form); });
  const Index k = std::min<Index>(c.k, disc.num_dofs());
  const EigenResult r = stage("eigensolve", [&] { return solve_smallest(sys.stiffness, sys.mass, k, solver_options(c)); });
  log << "elements " << disc.mesh.num_elements() << ", dofs " << disc.num_dofs() << ", h " << format_number(disc.h)
      << '\n';
  log << "lambda_1 " << format_number(r.values[0]) << '\n';
  if (l.domain) {
    const ExactSpectrum ex = exact_spectrum(*l.domain, operator_order(c.form.problem), std::size_t(k));
    const std::size_t count = std::min<std::size_t>(10, std::size_t(k));
    log << "above exact (first " << count << "): " << (all_above_exact(ex, r.values, count) ? "yes" : "no") << '\n';
  }
  out["eigenvalues.csv"] = eigen_csv(r);
  if (c.vtk) {
    if (c.target > std::size_t(r.size())) throw ConfigError("--target exceeds the number of computed eigenpairs");
    std::ostringstream os;
    write_vtk(os, disc.mesh, disc.space, r.vectors.col(Index(c.target) - 1), "eigenfunction");
    out["eigenfunction_" + std::to_string(c.target) + ".vtk"] = os.str();
  }
  if (c.export_matrices) {
    std::ostringstream a, m;
    sys.stiffness.write_coordinate(a);
    sys.mass.write_coordinate(m);
    out["stiffness.txt"] = a.str();
    out["mass.txt"] = m.str();
  }
  if (c.coefficients) {
    std::ostringstream os;
    write_coefficients(os, disc.space);
    out["coefficients.csv"] = os.str();
  }
}

void cmd_convergence(const RunConfig& c, Loaded& l, std::ostream& log, Artifacts& out) {
  StudyConfig s;
  s.form = c.form;
  s.domain = *l.domain;
  s.target = c.target - 1;
  s.patch_size = c.patch_size;
  s.solver = solver_options(c);
  const auto rows = stage("convergence", [&] { return convergence_study(s, l.meshes); });
  for (const auto& r : rows)
    log << "h " << format_number(r.scale) << "  value " << format_number(r.value) << "  error "
        << format_number(r.error) << "  order " << (r.order ? format_number(*r.order) : "-") << '\n';
  out["errors.csv"] = rows_csv(rows, false);
  out["eigenfunction_errors.csv"] = rows_csv(rows, true);
}

void cmd_reliable(const RunConfig& c, Loaded& l, std::ostream& log, Artifacts& out) {
  std::sort(l.meshes.begin(), l.meshes.end(),
            [](const Mesh& a, const Mesh& b) { return a.num_elements() < b.num_elements(); });
  std::vector<Eigen::VectorXd> values;
  for (const Mesh& mesh : l.meshes) {
    if (mesh.num_elements() > kDenseThreshold)
      throw ConfigError("reliable needs full spectra; mesh exceeds " + std::to_string(kDenseThreshold) + " elements");
    const Discretization disc = stage("reconstruction", [&] { return discretize(mesh, c.form.m, c.patch_size); });
    const SystemMatrices sys = stage("assembly", [&] { return assemble_system(disc, c.form); });
    values.push_back(stage("eigensolve", [&] { return solve_dense(sys.stiffness, sys.mass).values; }));
  }
  const ExactSpectrum ex =
      exact_spectrum(*l.domain, operator_order(c.form.problem), std::size_t(values[0].size()));
  const ReliableCount rc = reliable_count(ex, values[1], values[0], c.rate_threshold, std::size_t(values[1].size()));
  log << "N " << values[1].size() << "  reliable " << rc.count << " (" << format_number(rc.percentage) << "%)\n";
  std::ostringstream os;
  CsvWriter w(os);
  w.header({"N", "count", "percentage"});
  w.cell(static_cast<long long>(values[1].size())).cell(static_cast<long long>(rc.count)).cell(rc.percentage);
  w.end_row();
  out["reliable.csv"] = os.str();
}

void cmd_source(const RunConfig& c, Loaded& l, std::ostream& log, Artifacts& out) {
  const Manufactured mf = manufactured(*l.domain, operator_order(c.form.problem));
  std::vector<double> scales, errors;
  std::vector<Index> dofs;
  for (const Mesh& mesh : l.meshes) {
    const Discretization disc = stage("reconstruction", [&] { return discretize(mesh, c.form.m, c.patch_size); });
    const SourceResult r = stage("source", [&] { return solve_source(c.form, disc, mf.f, &mf.u); });
    scales.push_back(disc.h);
    errors.push_back(r.energy_error);
    dofs.push_back(disc.num_dofs());
  }
  auto rows = convergence_rows(scales, errors);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].dofs = dofs[i];
    rows[i].function_error = rows[i].error;
    rows[i].function_order = rows[i].order;
    log << "h " << format_number(rows[i].scale) << "  energy error " << format_number(rows[i].error) << "  order "
        << (rows[i].order ? format_number(*rows[i].order) : "-") << '\n';
  }
  out["source_errors.csv"] = rows_csv(rows, true);
}

void cmd_mesh_info(const RunConfig& c, Loaded& l, std::ostream& log, Artifacts& out) {
  std::ostringstream os;
  CsvWriter w(os);
  w.header({"mesh", "dim", "vertices", "elements", "interior_faces", "boundary_faces", "h", "patch_size",
            "max_patch_diameter", "max_lambda"});
  for (std::size_t i = 0; i < l.meshes.size(); ++i) {
    const Discretization disc = stage("reconstruction", [&] { return discretize(l.meshes[i], c.form.m, c.patch_size); });
    double dmax = 0.0, lmax = 0.0;
    for (Index k = 0; k < disc.num_dofs(); ++k) {
      const Patch& p = disc.space.basis(k).patch;
      dmax = std::max(dmax, p.diameter);
      lmax = std::max(lmax, stage("reconstruction", [&] {
                        return lambda_constant(disc.mesh, disc.space.geometry, p, c.form.m);
                      }));
    }
    const std::size_t t = disc.space.basis(0).patch.members.size();
    w.cell(c.meshes[i]).cell(static_cast<long long>(disc.mesh.dim()));
    w.cell(static_cast<long long>(disc.mesh.num_vertices())).cell(static_cast<long long>(disc.mesh.num_elements()));
    w.cell(static_cast<long long>(disc.topology.num_interior()))
        .cell(static_cast<long long>(disc.topology.num_boundary()));
    w.cell(disc.h).cell(static_cast<long long>(t)).cell(dmax).cell(lmax);
    w.end_row();
    log << c.meshes[i] << ": " << disc.mesh.num_elements() << " elements, h " << format_number(disc.h)
        << ", max patch diameter / h " << format_number(dmax / disc.h) << '\n';
  }
  out["mesh_info.csv"] = os.str();
}

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{{"solve", Command::Solve},
                                                    {"convergence", Command::Convergence},
                                                    {"reliable", Command::Reliable},
                                                    {"source", Command::Source},
                                                    {"mesh-info", Command::MeshInfo}};
  return names;
}

}  // namespace

std::vector<std::string> expand_mesh_list(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) parts.push_back(item);
  if (parts.empty()) return parts;
  const auto colon = parts[0].find(':');
  if (is_generator(parts[0]))
    for (std::size_t i = 1; i < parts.size(); ++i)
      if (parts[i].find(':') == std::string::npos) parts[i] = parts[0].substr(0, colon + 1) + parts[i];
  return parts;
}

std::optional<Domain> domain_of(const std::string& spec) {
  if (spec.starts_with("square:")) return Domain::SquarePi;
  if (spec.starts_with("cube:")) return Domain::CubeUnit;
  return std::nullopt;
}

Mesh make_mesh(const std::string& spec) {
  if (spec.starts_with("square:")) return generate_square_tri(parse_count(spec.substr(7), spec), std::numbers::pi);
  if (spec.starts_with("cube:")) return generate_cube_tet(parse_count(spec.substr(5), spec));
  if (!fs::exists(spec)) throw ConfigError("mesh file not found: " + spec);
  return read_mesh_file(spec);
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig c;
  CLI::App app{"Patch reconstructed DG solver for Laplace and biharmonic eigenvalue problems"};
  app.option_defaults()->always_capture_default();
  std::string command, problem = "laplace", bc;
  std::vector<std::string> mesh;
  app.add_option("command", command, "solve | convergence | reliable | source | mesh-info")
      ->required()
      ->check(CLI::IsMember({"solve", "convergence", "reliable", "source", "mesh-info"}));
  app.add_option("--problem", problem)->check(CLI::IsMember({"laplace", "biharmonic"}));
  app.add_option("--bc", bc, "dirichlet (laplace), clamped or simply_supported (biharmonic)")
      ->check(CLI::IsMember({"dirichlet", "clamped", "simply_supported"}));
  app.add_option("--m", c.form.m, "polynomial degree")->check(CLI::Range(1, 8));
  app.add_option("--t", c.patch_size, "patch size override (0: default)");
  app.add_option("--mesh", mesh, "square:n[,n..], cube:n[,n..] or .msh/.poly path(s)")->required()->delimiter(',');
  app.add_option("--k", c.k, "eigenpairs to compute");
  app.add_option("--target", c.target, "1-based eigenvalue index for convergence and VTK output");
  app.add_option("--eta", c.form.eta)->check(CLI::PositiveNumber);
  app.add_option("--alpha", c.form.alpha)->check(CLI::PositiveNumber);
  app.add_option("--beta", c.form.beta)->check(CLI::PositiveNumber);
  app.add_option("--tol", c.tol, "eigen residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--rate-threshold", c.rate_threshold);
  app.add_option("--seed", c.seed);
  app.add_option("--out", c.out, "output directory");
  app.add_option("--threads", c.threads)->envname("PATCHDG_THREADS")->check(CLI::PositiveNumber);
  app.add_flag("--vtk", c.vtk, "write the target eigenfunction as VTK (solve)");
  app.add_flag("--export-matrices", c.export_matrices, "write A and M in coordinate form (solve)");
  app.add_flag("--coefficients", c.coefficients, "dump every reconstruction coefficient table (solve)");
  app.set_config("--config", "", "flat key=value file; flags override it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  c.command = command_names().at(command);
  c.form.problem = problem == "laplace" ? Problem::Laplace : Problem::Biharmonic;
  if (bc.empty()) bc = c.form.problem == Problem::Laplace ? "dirichlet" : "simply_supported";
  if (c.form.problem == Problem::Laplace && bc != "dirichlet")
    throw ConfigError("the laplace problem only supports --bc dirichlet");
  if (c.form.problem == Problem::Biharmonic && bc == "dirichlet")
    throw ConfigError("the biharmonic problem needs --bc clamped or simply_supported");
  c.form.bc = bc == "dirichlet"  ? BoundaryCondition::Dirichlet
              : bc == "clamped" ? BoundaryCondition::Clamped
                                : BoundaryCondition::SimplySupported;
  std::string joined;
  for (const auto& part : mesh) joined += (joined.empty() ? "" : ",") + part;
  c.meshes = expand_mesh_list(joined);
  return c;
}

int run(const RunConfig& config, std::ostream& log, std::ostream& err) {
  Artifacts files;
  try {
    Loaded loaded = load_meshes(config);
    check_config(config, loaded);
    set_num_threads(config.threads);
    switch (config.command) {
      case Command::Solve:
        cmd_solve(config, loaded, log, files);
        break;
      case Command::Convergence:
        cmd_convergence(config, loaded, log, files);
        break;
      case Command::Reliable:
        cmd_reliable(config, loaded, log, files);
        break;
      case Command::Source:
        cmd_source(config, loaded, log, files);
        break;
      case Command::MeshInfo:
        cmd_mesh_info(config, loaded, log, files);
        break;
    }
    write_artifacts(config.out, files);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const StageError& e) {
    err << "error in " << e.stage << ": " << e.error.what();
    if (e.error.element()) err << " (element " << *e.error.element() << ')';
    err << '\n';
    return is_numerical(e.error.code()) ? kExitNumerical : kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? kExitNumerical : kExitConfig;
  }
  return kExitOk;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_args(argc, argv, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!config) return kExitOk;
  return run(*config, out, err);
}

}  // namespace patchdg::cli
