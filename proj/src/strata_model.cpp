#include "strata/strata_model.hpp"

#include <algorithm>
#include <functional>

namespace strata {

std::string key_string(const StratumKey& k) {
  std::string s = "{";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(k[i]);
  }
  return s + "}";
}

bool is_valid_key(const StratumKey& k) {
  if (k.empty()) return false;
  for (std::size_t i = 1; i < k.size(); ++i)
    if (k[i - 1] >= k[i]) return false;
  return true;
}

StratumKey with(const StratumKey& k, int j) {
  StratumKey r = k;
  r.insert(std::lower_bound(r.begin(), r.end(), j), j);
  return r;
}

StratumKey without(const StratumKey& k, int j) {
  StratumKey r;
  r.reserve(k.size());
  for (int x : k)
    if (x != j) r.push_back(x);
  return r;
}

bool contains(const StratumKey& k, int j) { return std::binary_search(k.begin(), k.end(), j); }

IncidenceStructure::IncidenceStructure(const IncidenceStructure& o)
    : t_(o.t_), n_(o.n_), strata_(o.strata_), edges_(o.edges_), problems_(o.problems_) {
  std::lock_guard<std::mutex> lock(o.cache_mutex_);
  products_ = o.products_;
}

IncidenceStructure& IncidenceStructure::operator=(const IncidenceStructure& o) {
  if (this == &o) return *this;
  t_ = o.t_;
  n_ = o.n_;
  strata_ = o.strata_;
  edges_ = o.edges_;
  problems_ = o.problems_;
  std::scoped_lock lock(cache_mutex_, o.cache_mutex_);
  products_ = o.products_;
  return *this;
}

void IncidenceStructure::add_stratum(StratumKey key, PresentationPtr p) {
  if (!p) throw StrataError("stratum " + key_string(key) + " has no presentation");
  if (!strata_.emplace(key, std::move(p)).second)
    throw StrataError("stratum " + key_string(key) + " given twice");
  std::lock_guard<std::mutex> lock(cache_mutex_);
  products_.clear();
}

void IncidenceStructure::add_edge(StratumKey from, StratumKey to,
                                  std::optional<GradedMap> pullback,
                                  std::optional<GradedMap> pushforward) {
  const std::string name = key_string(from) + " -> " + key_string(to);
  if (!has(from) || !has(to)) throw StrataError("edge " + name + " joins an absent stratum");
  const PresentationPtr& a = stratum(from);
  const PresentationPtr& b = stratum(to);
  if (pullback && (!same_presentation(pullback->source(), a) ||
                   !same_presentation(pullback->target(), b) ||
                   pullback->kind() != MapKind::ring))
    throw StrataError("edge " + name + ": pullback must be a ring map from the larger stratum");
  if (pushforward && (!same_presentation(pushforward->source(), b) ||
                      !same_presentation(pushforward->target(), a) ||
                      pushforward->kind() != MapKind::additive))
    throw StrataError("edge " + name + ": pushforward must be an additive map into the larger stratum");
  PairKey k{from, to};
  if (edges_.count(k)) throw StrataError("edge " + name + " given twice");
  edges_.emplace(k, Edge{std::move(from), std::move(to), std::move(pullback), std::move(pushforward)});
}

const PresentationPtr& IncidenceStructure::stratum(const StratumKey& k) const {
  auto it = strata_.find(k);
  if (it == strata_.end()) throw StrataError("stratum " + key_string(k) + " is absent");
  return it->second;
}

const GradedMap& IncidenceStructure::pullback(const StratumKey& from, const StratumKey& to) const {
  auto it = edges_.find({from, to});
  if (it == edges_.end() || !it->second.pullback)
    throw StrataError("no pullback for " + key_string(from) + " -> " + key_string(to));
  return *it->second.pullback;
}

const GradedMap& IncidenceStructure::pushforward(const StratumKey& from,
                                                 const StratumKey& to) const {
  auto it = edges_.find({from, to});
  if (it == edges_.end() || !it->second.pushforward)
    throw StrataError("no pushforward for " + key_string(from) + " -> " + key_string(to));
  return *it->second.pushforward;
}

std::vector<StratumKey> IncidenceStructure::level_keys(int m) const {
  std::vector<StratumKey> out;
  for (const auto& [k, p] : strata_)
    if (static_cast<int>(k.size()) == m) out.push_back(k);
  return out;
}

PresentationPtr IncidenceStructure::product(const StratumKey& i, const StratumKey& j) const {
  const PresentationPtr& a = stratum(i);
  const PresentationPtr& b = stratum(j);
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = products_.find({i, j});
    if (it != products_.end()) return it->second;
  }
  PresentationPtr t = tensor(a, b);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return products_.emplace(PairKey{i, j}, std::move(t)).first->second;
}

// ---------------------------------------------------------------------------

namespace {

GradedMap additive_identity(const PresentationPtr& p) {
  std::vector<ChowClass> id;
  id.reserve(p->size());
  for (std::size_t g = 0; g < p->size(); ++g) id.push_back(ChowClass::basis(p, g));
  return GradedMap(MapKind::additive, p, p, 0, std::move(id));
}

bool same_map(const GradedMap& f, const GradedMap& g) {
  if (f.source()->size() != g.source()->size()) return false;
  for (std::size_t x = 0; x < f.source()->size(); ++x)
    if (f.image(x) != g.image(x)) return false;
  return true;
}

void check_edge(const IncidenceStructure& s, const Edge& e, std::vector<std::string>& out) {
  const std::string name = key_string(e.from) + " -> " + key_string(e.to);
  const PresentationPtr& big = s.stratum(e.from);
  const PresentationPtr& small = s.stratum(e.to);
  if (e.pullback) {
    for (const auto& v : e.pullback->check_ring_map()) out.push_back("edge " + name + ": pullback " + v);
  }
  if (e.pushforward && e.pushforward->shift() != 1)
    out.push_back("edge " + name + ": pushforward must raise codimension by 1");
  if (!e.pullback || !e.pushforward || e.pushforward->shift() != 1) return;

  // ι_*(ι*(x) · y) == x · ι_*(y)
  for (std::size_t x = 0; x < big->size(); ++x)
    for (std::size_t y = 0; y < small->size(); ++y) {
      const ChowClass bx = ChowClass::basis(big, x);
      const ChowClass by = ChowClass::basis(small, y);
      const ChowClass lhs = apply(*e.pushforward, mul(apply(*e.pullback, bx), by));
      const ChowClass rhs = mul(bx, apply(*e.pushforward, by));
      if (lhs != rhs)
        out.push_back("edge " + name + ": projection formula fails on (" + big->name(x) + ", " +
                      small->name(y) + ")");
    }
  // Pushforward preserves degrees of zero-cycles.
  for (std::size_t y = small->offset(small->dim()); y < small->size(); ++y) {
    const ChowClass by = ChowClass::basis(small, y);
    if (degree(apply(*e.pushforward, by)) != degree(by))
      out.push_back("edge " + name + ": pushforward changes the degree of " + small->name(y));
  }
}

}  // namespace

std::vector<std::string> validate(const IncidenceStructure& s) {
  std::vector<std::string> out = s.problems();
  if (s.t() < 1) out.push_back("t must be at least 1");
  if (s.n() < 1) out.push_back("n must be at least 1");

  for (const auto& [k, p] : s.strata()) {
    const std::string name = key_string(k);
    if (!is_valid_key(k) || k.front() < 1 || k.back() > s.t()) {
      out.push_back("stratum " + name + ": key must be a strictly increasing subset of 1.." +
                    std::to_string(s.t()));
      continue;
    }
    const int want = s.n() - static_cast<int>(k.size());
    if (p->dim() != want)
      out.push_back("stratum " + name + ": dimension " + std::to_string(p->dim()) + ", expected " +
                    std::to_string(want));
    for (const auto& v : p->check()) out.push_back("stratum " + name + ": " + v);
    for (int i : k) {
      if (k.size() == 1) break;
      const StratumKey sub = without(k, i);
      if (!s.has(sub))
        out.push_back("downward closure: " + name + " is present but " + key_string(sub) +
                      " is absent");
    }
  }
  for (int i = 1; i <= s.t(); ++i)
    if (!s.has({i})) out.push_back("component {" + std::to_string(i) + "} is absent");

  for (const auto& [k, e] : s.edges()) {
    const std::string name = key_string(e.from) + " -> " + key_string(e.to);
    if (e.to.size() != e.from.size() + 1 ||
        !std::includes(e.to.begin(), e.to.end(), e.from.begin(), e.from.end())) {
      out.push_back("edge " + name + " is not a codimension-one inclusion of strata");
      continue;
    }
    check_edge(s, e, out);
  }
  for (const auto& [k, p] : s.strata()) {
    if (!is_valid_key(k)) continue;
    for (int i = 1; i <= s.t(); ++i) {
      if (contains(k, i)) continue;
      const StratumKey up = with(k, i);
      if (!s.has(up)) continue;
      auto it = s.edges().find({k, up});
      const std::string name = key_string(k) + " -> " + key_string(up);
      if (it == s.edges().end()) {
        out.push_back("edge " + name + " is missing");
        continue;
      }
      if (!it->second.pullback) out.push_back("edge " + name + ": pullback data missing");
      if (!it->second.pushforward) out.push_back("edge " + name + ": pushforward data missing");
    }
  }
  if (!out.empty()) return out;

  // Squares I ⊂ I∪{a} ⊂ I∪{a,b} versus I ⊂ I∪{b} ⊂ I∪{a,b}.
  for (const auto& [k, p] : s.strata()) {
    for (int a = 1; a <= s.t(); ++a)
      for (int b = a + 1; b <= s.t(); ++b) {
        if (contains(k, a) || contains(k, b)) continue;
        const StratumKey ka = with(k, a), kb = with(k, b), kab = with(ka, b);
        if (!s.has(kab)) continue;
        const std::string name = key_string(k) + " ⊃ " + key_string(kab);
        const GradedMap via_a = compose(s.pullback(ka, kab), s.pullback(k, ka));
        const GradedMap via_b = compose(s.pullback(kb, kab), s.pullback(k, kb));
        if (!same_map(via_a, via_b)) out.push_back("square " + name + ": pullbacks disagree");
        const GradedMap push_a = compose(s.pushforward(k, ka), s.pushforward(ka, kab));
        const GradedMap push_b = compose(s.pushforward(k, kb), s.pushforward(kb, kab));
        if (!same_map(push_a, push_b)) out.push_back("square " + name + ": pushforwards disagree");
      }
  }
  return out;
}

std::size_t position(const StratumKey& J, int j) {
  if (contains(J, j)) throw std::invalid_argument("position: " + std::to_string(j) + " already in " + key_string(J));
  return static_cast<std::size_t>(std::lower_bound(J.begin(), J.end(), j) - J.begin()) + 1;
}

PresentationPtr stratum_product(const IncidenceStructure& s, const StratumKey& I,
                                const StratumKey& J) {
  return s.product(I, J);
}

GradedMap gysin_first(const IncidenceStructure& s, const StratumKey& I, int i,
                      const StratumKey& J) {
  const StratumKey smaller = without(I, i);
  return tensor_map(s.pullback(smaller, I), GradedMap::identity(s.stratum(J)),
                    s.product(smaller, J), s.product(I, J));
}

GradedMap push_second(const IncidenceStructure& s, const StratumKey& I, const StratumKey& J,
                      int j) {
  const StratumKey larger = with(J, j);
  return tensor_map(additive_identity(s.stratum(I)), s.pushforward(J, larger),
                    s.product(I, larger), s.product(I, J));
}

GradedMap push_first(const IncidenceStructure& s, const StratumKey& I, int i,
                     const StratumKey& J) {
  const StratumKey larger = with(I, i);
  return tensor_map(s.pushforward(I, larger), additive_identity(s.stratum(J)),
                    s.product(larger, J), s.product(I, J));
}

GradedMap gysin_second(const IncidenceStructure& s, const StratumKey& I, const StratumKey& J,
                       int j) {
  const StratumKey smaller = without(J, j);
  return tensor_map(GradedMap::identity(s.stratum(I)), s.pullback(smaller, J),
                    s.product(I, smaller), s.product(I, J));
}

std::vector<PairKey> enumerate_level(const IncidenceStructure& s, int m) {
  std::vector<PairKey> out;
  const auto keys = s.level_keys(m);
  for (const auto& a : keys)
    for (const auto& b : keys) out.emplace_back(a, b);
  return out;
}

}  // namespace strata
