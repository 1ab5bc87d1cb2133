#pragma once

// Built-in incidence structures and generator families.

#include "strata/correspondence.hpp"
#include "strata/strata_model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace strata {

/// t copies of P^1, Y_i meeting Y_{i+1} in one point (n = 2). t = 1 is a
/// single smooth component.
IncidenceStructure chain_p1(int t);

/// t >= 3 copies of P^1 arranged in a cycle (n = 2), no triple points.
IncidenceStructure cycle_p1(int t);

/// Three planes pairwise meeting in lines through one common point (n = 3).
IncidenceStructure triple_plane();

/// Three copies of P^2 blown up in three points, glued along lines into a
/// triangle with one triple point (n = 3). Every stratum satisfies the
/// triple-point formula, so the restriction and Gysin maps square to zero.
IncidenceStructure resolved_triple_plane();

/// Copy of s with component i renamed perm[i-1]. perm is a permutation of 1..t.
IncidenceStructure relabel(const IncidenceStructure& s, const std::vector<int>& perm);

/// Γ_{i,i} = diagonal of Y_i, one sheet, level 1 only.
LevelOneInput identity_family(const IncidenceStructure& s);

/// Level-1 data of the graph of an automorphism permuting components:
/// Γ_{i,σ(i)} is the graph class of the identification A(Y_{σ(i)}) = A(Y_i).
/// sigma is 1-based (sigma[i-1] = σ(i)). Throws std::invalid_argument unless
/// σ maps strata onto strata with identical presentations and edge data.
LevelOneInput graph_family(const IncidenceStructure& s, const std::vector<int>& sigma,
                           const std::string& label);

/// Σ c_k F_k with sheets of equal labels merged before scaling.
LevelOneInput combination(const std::vector<std::pair<Integer, LevelOneInput>>& terms);

/// Named generator families shipped with a structure, e.g. "identity",
/// "rotation", "reflection", "reversal".
std::vector<std::pair<std::string, LevelOneInput>> generator_families(const std::string& structure,
                                                                      const IncidenceStructure& s);

/// Permutations used by the generators.
std::vector<int> rotation(int t, int steps);
std::vector<int> reflection(int t);  // i -> t + 1 - i

}  // namespace strata
