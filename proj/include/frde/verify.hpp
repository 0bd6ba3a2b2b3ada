#pragma once

#include <vector>

#include "frde/fracint.hpp"

namespace frde::verify {

// Executable checks of the structural lemmas behind the solver: monotonicity
// transfer, tail limits, closed forms, the weakly singular inequality, and
// weighted continuity. All randomness is fixed-seed.
std::vector<PropertyVerdict> run_lemma_suite();

// Solver invariants: exactness on closed-form forcing, trivial right-hand
// side, mesh refinement, positivity, serial/parallel equality, extension
// consistency, and the residual contract.
std::vector<PropertyVerdict> run_solver_suite();

}  // namespace frde::verify
