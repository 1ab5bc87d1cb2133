#pragma once

// Families of stratum correspondences Γ_{I,J} and the level-by-level solver.
//
// A family is a list of sheets. A sheet stands for one support component of
// the correspondence: its level-1 classes determine a relation R ⊂ Δ x Δ
// (the pairs (i, j) with Γ_{i,j} != 0), and its level-m classes may only
// live on pairs (I, J) that R matches bijectively. Classes of different
// sheets are never compared against each other by the solver; the family's
// Γ_{I,J} is the sum over its sheets.

#include "strata/strata_model.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace strata {

/// (I, J) -> class of codim n - m on Y_I x Y_J. Absent pairs are zero.
using LevelMap = std::map<PairKey, ChowClass>;

struct Sheet {
  std::string label;
  std::vector<LevelMap> levels;  // levels[m - 1]
};

struct CorrespondenceFamily {
  std::vector<Sheet> sheets;

  /// Number of levels every sheet carries (0 for an empty family).
  int depth() const;
  /// Γ^{(m)} summed over sheets, zero classes dropped.
  LevelMap level(int m) const;
};

/// A family that carries only level 1.
using LevelOneInput = CorrespondenceFamily;

class FamilyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  enum class Kind { inconsistent, non_unique };
  SolverError(Kind kind, int level, StratumKey I, std::string sheet, std::string context = {});

  Kind kind() const { return kind_; }
  int level() const { return level_; }
  const StratumKey& I() const { return I_; }
  const std::string& sheet() const { return sheet_; }
  const std::string& context() const { return context_; }

 private:
  Kind kind_;
  int level_;
  StratumKey I_;
  std::string sheet_;
  std::string context_;
};

/// Some system has no integer solution.
class InconsistentData : public SolverError {
 public:
  InconsistentData(int level, StratumKey I, std::string sheet, std::string context = {})
      : SolverError(Kind::inconsistent, level, std::move(I), std::move(sheet), std::move(context)) {}
};

/// Some system has more than one integer solution.
class NonUniqueDecomposition : public SolverError {
 public:
  NonUniqueDecomposition(int level, StratumKey I, std::string sheet, std::string context = {})
      : SolverError(Kind::non_unique, level, std::move(I), std::move(sheet), std::move(context)) {}
};

/// Rethrows `e` as the same error kind with `context` attached.
[[noreturn]] void rethrow_with_context(const SolverError& e, const std::string& context);

/// Pairs (i, j) with a nonzero level-1 class in the sheet.
std::set<std::pair<int, int>> sheet_relation(const Sheet& sheet);

/// (I, J) present at level m that admit a bijection σ: I -> J with
/// (i, σ(i)) in `relation` for every i.
bool in_support(const std::set<std::pair<int, int>>& relation, const StratumKey& I,
                const StratumKey& J);

/// Checks shapes and presentations of every stored class; throws FamilyError.
void check_family(const IncidenceStructure& s, const CorrespondenceFamily& f);

/// c * f, sheet by sheet.
CorrespondenceFamily scaled(const CorrespondenceFamily& f, const Integer& c);
/// Sheets of a followed by sheets of b. Both must have the same depth.
CorrespondenceFamily sum(const CorrespondenceFamily& a, const CorrespondenceFamily& b);
/// Keeps only level 1 of every sheet.
LevelOneInput level_one(const CorrespondenceFamily& f);

struct SolveOptions {
  /// Highest level to compute; 0 means n.
  int max_level = 0;
  /// Worker threads for the independent solves of one level; 0 or 1 is serial.
  int threads = 0;
};

/// Runs the recursion on every sheet up to the requested level.
/// Throws InconsistentData / NonUniqueDecomposition (first failure in
/// (level, sheet, I) order), FamilyError on malformed input.
CorrespondenceFamily compute_all_levels(const IncidenceStructure& s, const LevelOneInput& g1,
                                        const SolveOptions& opts = {});

/// (B ∘ A)_{I,K} = Σ_J p13_*((A_{I,J} ⊗ 1) · (1 ⊗ B_{J,K})).
LevelMap compose_level(const IncidenceStructure& s, const LevelMap& a, const LevelMap& b, int m);

/// Level-1 input of B ∘ A: every pair of sheets composed, zero sheets dropped.
LevelOneInput compose_inputs(const IncidenceStructure& s, const LevelOneInput& a,
                             const LevelOneInput& b);

struct Mismatch {
  int level;
  StratumKey I;
  StratumKey K;
  std::string expected;  // from the composite's own recursion
  std::string actual;    // composition of the two recursions
};

struct CompositionReport {
  bool pass = true;
  std::vector<Mismatch> mismatches;
  /// Number of (m, I, K) entries compared.
  std::size_t compared = 0;
};

/// Compares compute_all_levels(compose(a, b)) with compose_level of the two
/// computed families at every level. Solver errors are rethrown with a
/// context naming the failing family ("first", "second" or "composite").
CompositionReport check_composition(const IncidenceStructure& s, const LevelOneInput& a,
                                    const LevelOneInput& b, const SolveOptions& opts = {});

/// Component I of pr_1*(Γ_{I,J} · (1 ⊗ x)) for every I present at level m.
/// Throws StrataError if J is absent and FamilyError if level m is missing.
std::map<StratumKey, ChowClass> act(const IncidenceStructure& s, const CorrespondenceFamily& f,
                                    int m, const StratumKey& J, const ChowClass& x);

struct TransposeReport {
  bool pass = true;
  std::vector<std::string> failures;  // "(I,J)" descriptions
};

/// Diagnostic: checks the mirrored identity
/// Σ_h (-1)^h (id ⊗ ι*)(Γ_{I, J∖{j_h}}) = Σ_{i∉I} (-1)^{h(i)} (ι_* ⊗ id)(Γ_{I∪{i}, J})
/// for |I| = m - 1, |J| = m, 2 <= m <= depth.
TransposeReport transpose_check(const IncidenceStructure& s, const CorrespondenceFamily& f);

}  // namespace strata
