// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace patchdg {

using Index = std::ptrdiff_t;

enum class Errc {
  InvalidArgument,
  IoError,
  ParseError,
  UnsupportedVersion,
  DanglingNode,
  MixedDimension,
  NonCCW,
  NotStarShaped,
  BadCount,
  NonManifold,
  DegenerateElement,
  DegenerateSimplex,
  OrderUnsupported,
  PatchExhausted,
  RankDeficient,
  DegreeTooLow,
  MassNotSPD,
  StiffnessNotSPD,
  PenaltyTooSmall,
  NoConvergence,
  ClusterAmbiguous,
};

const char* to_string(Errc code) noexcept;

/// Numerical failures are the ones a caller may fix by changing the
/// discretization (patch size, penalties, iteration limits) rather than input.
bool is_numerical(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<Index> element = std::nullopt);

  Errc code() const noexcept { return code_; }
  /// Offending element id, when the failure is local to one element.
  std::optional<Index> element() const noexcept { return element_; }

 private:
  Errc code_;
  std::optional<Index> element_;
};

}  // namespace patchdg
