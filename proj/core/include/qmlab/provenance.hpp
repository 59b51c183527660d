#pragma once

#include <string>

#include "qmlab/version.hpp"

namespace qmlab {

/// Stamp carried at the top of every CSV/JSON output: tool version,
/// resolved-config hash, and the unit system in force.
struct Provenance {
  std::string tool_version = version;
  std::string config_hash = "0";
  std::string units = "natural";

  std::string comment_line() const {
    return "# qmlab " + tool_version + " config=" + config_hash +
           " units=" + units;
  }
};

}  // namespace qmlab
