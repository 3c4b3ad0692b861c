#pragma once

#include <vector>

#include "ergolab/kernel/types.hpp"

namespace ergolab::kernel {

// Strongly connected components of the jump graph (edge i -> j iff
// L(i, j) > 0), each sorted ascending, components ordered by smallest state.
std::vector<std::vector<int>> strongly_connected_components(const RateMatrix& gen);

// Components with no rate leading out of them; same ordering.
std::vector<std::vector<int>> closed_classes(const RateMatrix& gen);

// States reachable from x through positive rates, including x itself.
std::vector<int> reachable_from(const RateMatrix& gen, int x);

// Graph irreducibility relative to psi: every state reaches every state psi
// charges.  psi must not be the zero measure.  With the default counting
// measure this is plain irreducibility of the jump graph.
bool psi_irreducible(const RateMatrix& gen, const DiscreteMeasure& psi);

// Checks the uniform bound R_alpha(x, y) > 0 for all x and all y in supp(psi)
// (strictly: above tol::support_eps relative to the row maximum), returning
// the first failing pair as a witness.  When the bound holds, also confirms
// that every invariant probability charges supp(psi).
DominationCertificate domination_certificate(const RateMatrix& gen, const DiscreteMeasure& psi,
                                             double alpha, Exec exec = default_exec());

// Combines the invariant-measure count, psi-irreducibility, and the
// domination certificate into a single uniqueness verdict.
//
// Path regularity of the underlying process (right-continuity) is an
// assumption of this reduction, not something a generator can witness; it is
// taken as given here.
UniquenessReport uniqueness_verdict(const RateMatrix& gen, const DiscreteMeasure& psi, double alpha,
                                    Exec exec = default_exec());

// Splits the state space relative to two mutually singular invariant
// probabilities: with C = supp(mu_plus), iterates E -> {x : R_alpha^n(x, C)
// = 1 (within tol::absorbing_mass)} intersecting over n until stable (at
// most size() rounds), and likewise for the complement of C.  Throws
// std::domain_error if either measure is not invariant or the supports
// overlap (naming the overlapping state).
AbsorbingDecomposition absorbing_decomposition(const RateMatrix& gen, const DiscreteMeasure& mu_plus,
                                               const DiscreteMeasure& mu_minus, double alpha,
                                               Exec exec = default_exec());

}  // namespace ergolab::kernel
