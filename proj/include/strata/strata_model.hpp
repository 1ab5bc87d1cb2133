#pragma once

// Combinatorial skeleton of a strictly semistable special fiber: components
// 1..t, strata Y_I for nonempty I, and restriction/Gysin data on every
// codimension-one inclusion Y_{I ∪ {i}} ⊂ Y_I.

#include "strata/chow.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace strata {

/// Strictly increasing list of component labels (1-based). The empty key is
/// only used as the J = ∅ argument of position().
using StratumKey = std::vector<int>;
using PairKey = std::pair<StratumKey, StratumKey>;

std::string key_string(const StratumKey& k);  // "{1,2}"
bool is_valid_key(const StratumKey& k);
/// k ∪ {j}, sorted.
StratumKey with(const StratumKey& k, int j);
/// k ∖ {j}.
StratumKey without(const StratumKey& k, int j);
bool contains(const StratumKey& k, int j);

class StrataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  StratumKey from;  // I
  StratumKey to;    // I ∪ {i}
  /// ι*: A(Y_I) -> A(Y_{I∪{i}}), ring map.
  std::optional<GradedMap> pullback;
  /// ι_*: A(Y_{I∪{i}}) -> A(Y_I), shift 1.
  std::optional<GradedMap> pushforward;
};

class IncidenceStructure {
 public:
  IncidenceStructure(int t, int n) : t_(t), n_(n) {}
  IncidenceStructure(const IncidenceStructure& o);
  IncidenceStructure& operator=(const IncidenceStructure& o);

  int t() const { return t_; }
  int n() const { return n_; }

  void add_stratum(StratumKey key, PresentationPtr p);
  /// Maps must be expressed on the presentations already registered for
  /// `from` and `to`.
  void add_edge(StratumKey from, StratumKey to, std::optional<GradedMap> pullback,
                std::optional<GradedMap> pushforward);

  bool has(const StratumKey& k) const { return strata_.count(k) != 0; }
  /// Throws StrataError when absent.
  const PresentationPtr& stratum(const StratumKey& k) const;
  const std::map<StratumKey, PresentationPtr>& strata() const { return strata_; }
  const std::map<PairKey, Edge>& edges() const { return edges_; }
  /// Throws StrataError when the edge or the requested map is missing.
  const GradedMap& pullback(const StratumKey& from, const StratumKey& to) const;
  const GradedMap& pushforward(const StratumKey& from, const StratumKey& to) const;

  /// Present strata with |I| = m, in lexicographic order.
  std::vector<StratumKey> level_keys(int m) const;

  /// Problems found while loading that could not be represented (for
  /// example an edge touching an absent stratum); validate reports them.
  void note_problem(std::string message) { problems_.push_back(std::move(message)); }
  const std::vector<std::string>& problems() const { return problems_; }

  /// tensor(Y_I, Y_J), built once per pair and shared afterwards.
  PresentationPtr product(const StratumKey& i, const StratumKey& j) const;

 private:
  int t_;
  int n_;
  std::map<StratumKey, PresentationPtr> strata_;
  std::map<PairKey, Edge> edges_;
  std::vector<std::string> problems_;

  mutable std::mutex cache_mutex_;
  mutable std::map<PairKey, PresentationPtr> products_;
};

/// Every violated invariant, one message per line; empty when valid.
std::vector<std::string> validate(const IncidenceStructure& s);

/// 1-based position of j in the increasing ordering of J ∪ {j}.
/// Throws std::invalid_argument when j ∈ J.
std::size_t position(const StratumKey& J, int j);

/// Y_{I,J} = Y_I x Y_J. Throws StrataError on an absent stratum.
PresentationPtr stratum_product(const IncidenceStructure& s, const StratumKey& I,
                                const StratumKey& J);

/// ι* ⊗ id : A(Y_{I∖{i}, J}) -> A(Y_{I,J}).
GradedMap gysin_first(const IncidenceStructure& s, const StratumKey& I, int i,
                      const StratumKey& J);
/// id ⊗ ι_* : A(Y_{I, J∪{j}}) -> A(Y_{I,J}).
GradedMap push_second(const IncidenceStructure& s, const StratumKey& I, const StratumKey& J,
                      int j);
/// ι_* ⊗ id : A(Y_{I∪{i}, J}) -> A(Y_{I,J}).
GradedMap push_first(const IncidenceStructure& s, const StratumKey& I, int i,
                     const StratumKey& J);
/// id ⊗ ι* : A(Y_{I, J∖{j}}) -> A(Y_{I,J}).
GradedMap gysin_second(const IncidenceStructure& s, const StratumKey& I, const StratumKey& J,
                       int j);

/// All (I, J) with |I| = |J| = m and both strata present, lexicographic.
std::vector<PairKey> enumerate_level(const IncidenceStructure& s, int m);

}  // namespace strata
