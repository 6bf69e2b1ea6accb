// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "patchdg/analysis.hpp"

namespace patchdg::cli {

enum class Command { Solve, Convergence, Reliable, Source, MeshInfo };

struct RunConfig {
  Command command = Command::Solve;
  FormConfig form;
  std::size_t patch_size = 0;      // 0: default
  std::vector<std::string> meshes;  // "square:n", "cube:n" or a file path, one per mesh
  Index k = 10;
  std::size_t target = 1;  // 1-based
  double tol = 1e-9;
  double rate_threshold = 1.0;
  std::string out = ".";
  int threads = 1;
  bool vtk = false;
  bool export_matrices = false;
  bool coefficients = false;
  std::uint64_t seed = LanczosOptions{}.seed;
};

/// Bad flags, values or inputs. Maps to exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Parses flags, an optional key=value file given by --config (flags win) and
/// PATCHDG_THREADS. Throws ConfigError. Returns nullopt after --help.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// "square:4,8,16" -> square:4, square:8, square:16. Other comma lists are split as is.
std::vector<std::string> expand_mesh_list(const std::string& spec);

/// Builds the mesh named by one spec. square:n spans [0, pi]^2.
Mesh make_mesh(const std::string& spec);

/// Exact spectrum domain for a generator spec, nullopt for file meshes.
std::optional<Domain> domain_of(const std::string& spec);

/// Runs one command. Diagnostics go to `err`, progress to `log`.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace patchdg::cli
