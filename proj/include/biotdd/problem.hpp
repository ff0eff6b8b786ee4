#pragma once

#include "biotdd/assembly.hpp"

namespace biot {

/// Sources, boundary data and initial pressure.  Empty functions read as zero.
struct ProblemData {
  VectorFn f;            ///< body force, div sigma = -f
  ScalarFn g;            ///< fluid source
  VectorFn g_u;          ///< displacement on displacement sides
  ScalarFn g_p;          ///< pressure on pressure sides
  TractionFn traction;   ///< sigma n on traction sides
  ScalarFn flux;         ///< z.n on no-flux sides
  ScalarFn p0;           ///< initial pressure
};

}  // namespace biot
