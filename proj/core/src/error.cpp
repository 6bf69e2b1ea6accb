// SPDX-License-Identifier: Apache-2.0
#include "patchdg/error.hpp"

namespace patchdg {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IoError: return "IoError";
    case Errc::ParseError: return "ParseError";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::DanglingNode: return "DanglingNode";
    case Errc::MixedDimension: return "MixedDimension";
    case Errc::NonCCW: return "NonCCW";
    case Errc::NotStarShaped: return "NotStarShaped";
    case Errc::BadCount: return "BadCount";
    case Errc::NonManifold: return "NonManifold";
    case Errc::DegenerateElement: return "DegenerateElement";
    case Errc::DegenerateSimplex: return "DegenerateSimplex";
    case Errc::OrderUnsupported: return "OrderUnsupported";
    case Errc::PatchExhausted: return "PatchExhausted";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::DegreeTooLow: return "DegreeTooLow";
    case Errc::MassNotSPD: return "MassNotSPD";
    case Errc::StiffnessNotSPD: return "StiffnessNotSPD";
    case Errc::PenaltyTooSmall: return "PenaltyTooSmall";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ClusterAmbiguous: return "ClusterAmbiguous";
  }
  return "Unknown";
}

bool is_numerical(Errc code) noexcept {
  switch (code) {
    case Errc::RankDeficient:
    case Errc::PatchExhausted:
    case Errc::MassNotSPD:
    case Errc::StiffnessNotSPD:
    case Errc::PenaltyTooSmall:
    case Errc::NoConvergence:
    case Errc::ClusterAmbiguous:
    case Errc::DegenerateElement:
    case Errc::DegenerateSimplex:
      return true;
    default:
      return false;
  }
}

Error::Error(Errc code, const std::string& what, std::optional<Index> element)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), element_(element) {}

}  // namespace patchdg
