#pragma once

#include "conelift/ipm.hpp"
#include "conelift/program.hpp"

namespace conelift::qp {

/// Active-set refinement of an interior-point answer. Guesses the active rows
/// from (s, z), solves the equality-constrained KKT system exactly and keeps
/// the result only if it is primal and dual feasible. Returns true when the
/// refinement was accepted.
bool polish(const ConicProgram& prog, ipm::Result& result, double tol = 1e-9);

/// Same idea for programs with second-order blocks: each block is classified
/// as inactive, pinned at zero or on the boundary, and the resulting smooth
/// KKT system is solved by Newton's method.
bool polish_conic(const ConicProgram& prog, ipm::Result& result, double tol = 1e-9);

/// Interior-point solve followed by the matching polish step.
ipm::Result solve(const ConicProgram& prog, const ipm::Options& opts = {});

}  // namespace conelift::qp
