#pragma once

// E1 page of the weight spectral sequence in the Chow model:
//   E1^{i,j} = ⊕_{s >= max(0,-i)} A^{(j-2s)/2}(Y^{(i+2s+1)})(-s),
// with Y^{(m)} the disjoint union of the strata Y_I, |I| = m.

#include "strata/correspondence.hpp"
#include "strata/strata_model.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace strata {

/// One summand A^k(Y^{(m)})(-s) of a term.
struct E1Summand {
  int m = 0;
  int k = 0;
  int s = 0;
  std::vector<StratumKey> strata;    // present I with |I| = m
  std::vector<std::size_t> offsets;  // start of each stratum's block inside the summand
  std::size_t dim = 0;
  std::size_t start = 0;  // start of this summand inside the term
  int twist() const { return -s; }
};

struct E1Term {
  int i = 0;
  int j = 0;
  std::vector<E1Summand> summands;  // increasing s
  std::size_t dim = 0;
};

using Bidegree = std::pair<int, int>;

struct E1Page {
  std::shared_ptr<const IncidenceStructure> structure;
  std::map<Bidegree, E1Term> terms;
  /// d1: E1^{i,j} -> E1^{i+1,j}, keyed by the source bidegree. Present for
  /// every source term whose target term exists.
  std::map<Bidegree, IntMatrix> d1;
};

class WssError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws WssError when the structure fails validation.
E1Page build_e1(const IncidenceStructure& s);

struct CheckResult {
  std::string name;
  bool pass = true;
  /// On failure: the first offending bidegree and a source basis vector that
  /// witnesses it, e.g. "(i=-1,j=2) basis 0 [s=1 Y_{1,2} 1]".
  std::string counterexample;
};

/// One check per composite E1^{i,j} -> E1^{i+2,j}.
std::vector<CheckResult> check_d1_squared(const E1Page& page);
bool d1_squared_zero(const E1Page& page);

/// dim ker - rank of incoming d1, per bidegree. Throws WssError if d1^2 != 0.
std::map<Bidegree, std::size_t> e2_ranks(const E1Page& page);
/// Sum of E2 ranks over i + j = w for w = 0 .. 2(n-1).
std::vector<std::size_t> e2_totals(const E1Page& page);

/// Block-diagonal action of the family on every term. Throws FamilyError if
/// the family lacks a level the page needs.
std::map<Bidegree, IntMatrix> corr_action_on_e1(const E1Page& page, const CorrespondenceFamily& f);

/// One check per d1 position: d1 ∘ action == action ∘ d1.
std::vector<CheckResult> check_equivariance(const E1Page& page, const CorrespondenceFamily& f);

/// Name of basis element `idx` of a term, e.g. "s=1 Y_{1,2} 1".
std::string basis_label(const E1Page& page, const E1Term& term, std::size_t idx);

}  // namespace strata
