#include "strata/generators.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace strata {

namespace {

GradedMap make_map(MapKind kind, const PresentationPtr& src, const PresentationPtr& dst, int shift,
                   const std::vector<std::vector<long>>& images) {
  std::vector<ChowClass> v;
  v.reserve(images.size());
  for (std::size_t g = 0; g < images.size(); ++g) {
    std::vector<Integer> c(images[g].begin(), images[g].end());
    v.emplace_back(dst, src->codim_of(g) + shift, std::move(c));
  }
  return GradedMap(kind, src, dst, shift, std::move(v));
}

// The standard P^1 ⊃ point data: ι*(1) = 1, ι*(h) = 0, ι_*(1) = h.
void point_on_line(IncidenceStructure& s, const StratumKey& line, const StratumKey& pt) {
  const PresentationPtr& a = s.stratum(line);
  const PresentationPtr& b = s.stratum(pt);
  s.add_edge(line, pt, make_map(MapKind::ring, a, b, 0, {{1}, {}}),
             make_map(MapKind::additive, b, a, 1, {{1}}));
}

}  // namespace

IncidenceStructure chain_p1(int t) {
  if (t < 1) throw std::invalid_argument("chain_p1 needs t >= 1");
  const PresentationPtr line = ChowPresentation::projective_space(1);
  const PresentationPtr pt = ChowPresentation::point();
  IncidenceStructure s(t, 2);
  for (int i = 1; i <= t; ++i) s.add_stratum({i}, line);
  for (int i = 1; i < t; ++i) s.add_stratum({i, i + 1}, pt);
  for (int i = 1; i < t; ++i) {
    point_on_line(s, {i}, {i, i + 1});
    point_on_line(s, {i + 1}, {i, i + 1});
  }
  return s;
}

IncidenceStructure cycle_p1(int t) {
  if (t < 3) throw std::invalid_argument("cycle_p1 needs t >= 3");
  const PresentationPtr line = ChowPresentation::projective_space(1);
  const PresentationPtr pt = ChowPresentation::point();
  IncidenceStructure s(t, 2);
  for (int i = 1; i <= t; ++i) s.add_stratum({i}, line);
  std::vector<StratumKey> pairs;
  for (int i = 1; i <= t; ++i) {
    StratumKey k{i, i % t + 1};
    std::sort(k.begin(), k.end());
    pairs.push_back(k);
    s.add_stratum(k, pt);
  }
  for (const auto& k : pairs) {
    point_on_line(s, {k[0]}, k);
    point_on_line(s, {k[1]}, k);
  }
  return s;
}

IncidenceStructure triple_plane() {
  const PresentationPtr plane = ChowPresentation::projective_space(2);
  const PresentationPtr line = ChowPresentation::projective_space(1);
  const PresentationPtr pt = ChowPresentation::point();
  IncidenceStructure s(3, 3);
  for (int i = 1; i <= 3; ++i) s.add_stratum({i}, plane);
  const std::vector<StratumKey> lines{{1, 2}, {1, 3}, {2, 3}};
  for (const auto& k : lines) s.add_stratum(k, line);
  s.add_stratum({1, 2, 3}, pt);
  for (const auto& k : lines)
    for (int i : k)
      s.add_edge({i}, k, make_map(MapKind::ring, plane, line, 0, {{1}, {1}, {}}),
                 make_map(MapKind::additive, line, plane, 1, {{1}, {1}}));
  for (const auto& k : lines) point_on_line(s, k, {1, 2, 3});
  return s;
}

IncidenceStructure resolved_triple_plane() {
  // Basis 1 | H, E1, E2, E3 | pt with H^2 = pt, Ei^2 = -pt.
  std::vector<ChowPresentation::ProductEntry> prods{{0, 0, {1}}, {0, 5, {1}}};
  for (std::size_t g = 1; g <= 4; ++g) {
    std::vector<Integer> e(4, 0);
    e[g - 1] = 1;
    prods.push_back({0, g, e});
  }
  prods.push_back({1, 1, {1}});
  for (std::size_t g = 2; g <= 4; ++g) prods.push_back({g, g, {-1}});
  const PresentationPtr blown = ChowPresentation::explicit_ring(
      2, {{"1"}, {"H", "E1", "E2", "E3"}, {"pt"}}, prods, {1});
  const PresentationPtr line = ChowPresentation::projective_space(1);
  const PresentationPtr pt = ChowPresentation::point();

  IncidenceStructure s(3, 3);
  for (int i = 1; i <= 3; ++i) s.add_stratum({i}, blown);
  const std::vector<StratumKey> lines{{1, 2}, {1, 3}, {2, 3}};
  for (const auto& k : lines) s.add_stratum(k, line);
  s.add_stratum({1, 2, 3}, pt);

  // In Y_i the line towards Y_{i+1} has class H - E1 - E2 - E3 (self-intersection
  // -2), the line towards Y_{i-1} has class H (self-intersection 1).
  const GradedMap exc_pull = make_map(MapKind::ring, blown, line, 0, {{1}, {1}, {1}, {1}, {1}, {}});
  const GradedMap exc_push = make_map(MapKind::additive, line, blown, 1, {{1, -1, -1, -1}, {1}});
  const GradedMap hyp_pull = make_map(MapKind::ring, blown, line, 0, {{1}, {1}, {0}, {0}, {0}, {}});
  const GradedMap hyp_push = make_map(MapKind::additive, line, blown, 1, {{1, 0, 0, 0}, {1}});
  for (int i = 1; i <= 3; ++i) {
    StratumKey next{i, i % 3 + 1};
    StratumKey prev{i, (i + 1) % 3 + 1};
    std::sort(next.begin(), next.end());
    std::sort(prev.begin(), prev.end());
    s.add_edge({i}, next, exc_pull, exc_push);
    s.add_edge({i}, prev, hyp_pull, hyp_push);
  }
  for (const auto& k : lines) point_on_line(s, k, {1, 2, 3});
  return s;
}

IncidenceStructure relabel(const IncidenceStructure& s, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != s.t()) throw std::invalid_argument("relabel: wrong permutation size");
  auto map_key = [&](const StratumKey& k) {
    StratumKey r;
    for (int i : k) r.push_back(perm.at(i - 1));
    std::sort(r.begin(), r.end());
    return r;
  };
  IncidenceStructure out(s.t(), s.n());
  for (const auto& [k, p] : s.strata()) out.add_stratum(map_key(k), p);
  for (const auto& [k, e] : s.edges()) out.add_edge(map_key(e.from), map_key(e.to), e.pullback, e.pushforward);
  return out;
}

LevelOneInput identity_family(const IncidenceStructure& s) {
  std::vector<int> id(s.t());
  for (int i = 0; i < s.t(); ++i) id[i] = i + 1;
  return graph_family(s, id, "identity");
}

LevelOneInput graph_family(const IncidenceStructure& s, const std::vector<int>& sigma,
                           const std::string& label) {
  if (static_cast<int>(sigma.size()) != s.t()) throw std::invalid_argument("graph_family: wrong permutation size");
  std::vector<int> sorted = sigma;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < s.t(); ++i)
    if (sorted[i] != i + 1) throw std::invalid_argument("graph_family: not a permutation of 1..t");
  auto image = [&](const StratumKey& k) {
    StratumKey r;
    for (int i : k) r.push_back(sigma[i - 1]);
    std::sort(r.begin(), r.end());
    return r;
  };
  auto same_coeffs = [](const GradedMap& f, const GradedMap& g) {
    if (f.source()->size() != g.source()->size()) return false;
    for (std::size_t x = 0; x < f.source()->size(); ++x)
      if (f.image(x).coeffs() != g.image(x).coeffs()) return false;
    return true;
  };
  for (const auto& [k, p] : s.strata()) {
    const StratumKey img = image(k);
    if (!s.has(img) || !same_presentation(s.stratum(img), p))
      throw std::invalid_argument("graph_family: " + key_string(k) + " is not mapped onto an equal stratum");
  }
  for (const auto& [k, e] : s.edges()) {
    auto it = s.edges().find({image(e.from), image(e.to)});
    if (it == s.edges().end() || !e.pullback || !e.pushforward || !it->second.pullback ||
        !it->second.pushforward || !same_coeffs(*e.pullback, *it->second.pullback) ||
        !same_coeffs(*e.pushforward, *it->second.pushforward))
      throw std::invalid_argument("graph_family: edge " + key_string(e.from) + " -> " + key_string(e.to) +
                                  " is not carried to matching data");
  }

  Sheet sheet{label, {LevelMap{}}};
  for (int i = 1; i <= s.t(); ++i) {
    const StratumKey I{i};
    const StratumKey J{sigma[i - 1]};
    const ChowClass diag = diagonal_class(s.stratum(I));
    sheet.levels[0].emplace(PairKey{I, J}, ChowClass(s.product(I, J), diag.codim(), diag.coeffs()));
  }
  return LevelOneInput{{std::move(sheet)}};
}

LevelOneInput combination(const std::vector<std::pair<Integer, LevelOneInput>>& terms) {
  std::vector<Sheet> merged;
  std::map<std::string, std::size_t> by_label;
  for (const auto& [c, fam] : terms) {
    const LevelOneInput part = scaled(level_one(fam), c);
    for (const auto& sh : part.sheets) {
      auto it = by_label.find(sh.label);
      if (it == by_label.end()) {
        by_label.emplace(sh.label, merged.size());
        merged.push_back(sh);
        continue;
      }
      LevelMap& acc = merged[it->second].levels[0];
      for (const auto& [k, cls] : sh.levels[0]) {
        auto a = acc.find(k);
        if (a == acc.end())
          acc.emplace(k, cls);
        else
          a->second += cls;
      }
    }
  }
  LevelOneInput out;
  for (auto& sh : merged) {
    LevelMap& lvl = sh.levels[0];
    for (auto it = lvl.begin(); it != lvl.end();) it = it->second.is_zero() ? lvl.erase(it) : std::next(it);
    if (!lvl.empty()) out.sheets.push_back(std::move(sh));
  }
  return out;
}

std::vector<int> rotation(int t, int steps) {
  std::vector<int> r(t);
  for (int i = 0; i < t; ++i) r[i] = ((i + steps) % t + t) % t + 1;
  return r;
}

std::vector<int> reflection(int t) {
  std::vector<int> r(t);
  for (int i = 0; i < t; ++i) r[i] = t - i;
  return r;
}

std::vector<std::pair<std::string, LevelOneInput>> generator_families(const std::string& structure,
                                                                      const IncidenceStructure& s) {
  std::vector<std::pair<std::string, LevelOneInput>> out;
  out.emplace_back("identity", identity_family(s));
  if (structure == "chain_p1") {
    if (s.t() > 1) out.emplace_back("reversal", graph_family(s, reflection(s.t()), "reversal"));
  } else if (structure == "cycle_p1") {
    out.emplace_back("rotation", graph_family(s, rotation(s.t(), 1), "rotation"));
    out.emplace_back("rotation2", graph_family(s, rotation(s.t(), 2), "rotation2"));
    out.emplace_back("reflection", graph_family(s, reflection(s.t()), "reflection"));
  } else if (structure == "resolved_triple_plane") {
    out.emplace_back("rotation", graph_family(s, rotation(3, 1), "rotation"));
  } else if (structure != "triple_plane") {
    throw std::invalid_argument("unknown structure '" + structure + "'");
  }
  return out;
}

}  // namespace strata
