#include "strata/wss.hpp"

#include <algorithm>

namespace strata {

namespace {

const E1Summand* find_summand(const E1Term& t, int s) {
  for (const auto& sm : t.summands)
    if (sm.s == s) return &sm;
  return nullptr;
}

std::size_t block_offset(const E1Summand& sm, const StratumKey& I) {
  auto it = std::lower_bound(sm.strata.begin(), sm.strata.end(), I);
  return sm.start + sm.offsets[static_cast<std::size_t>(it - sm.strata.begin())];
}

void add_block(IntMatrix& m, std::size_t r0, std::size_t c0, const IntMatrix& blk, int sign) {
  for (std::size_t r = 0; r < blk.rows(); ++r)
    for (std::size_t c = 0; c < blk.cols(); ++c) m(r0 + r, c0 + c) += sign * blk(r, c);
}

std::string bidegree_string(const Bidegree& b) {
  return "(i=" + std::to_string(b.first) + ",j=" + std::to_string(b.second) + ")";
}

}  // namespace

E1Page build_e1(const IncidenceStructure& s) {
  const auto violations = validate(s);
  if (!violations.empty()) throw WssError("structure is invalid: " + violations.front());

  E1Page page;
  page.structure = std::make_shared<const IncidenceStructure>(s);
  const IncidenceStructure& st = *page.structure;
  const int n = st.n();
  for (int m = 1; m <= n; ++m)
    for (int sidx = 0; sidx <= m - 1; ++sidx)
      for (int k = 0; k <= n - m; ++k) {
        const int i = m - 2 * sidx - 1;
        const int j = 2 * k + 2 * sidx;
        E1Term& term = page.terms[{i, j}];
        term.i = i;
        term.j = j;
        E1Summand sm;
        sm.m = m;
        sm.k = k;
        sm.s = sidx;
        sm.strata = st.level_keys(m);
        for (const auto& I : sm.strata) {
          sm.offsets.push_back(sm.dim);
          sm.dim += st.stratum(I)->rank(k);
        }
        term.summands.push_back(std::move(sm));
      }
  for (auto& [bd, term] : page.terms) {
    std::sort(term.summands.begin(), term.summands.end(),
              [](const E1Summand& a, const E1Summand& b) { return a.s < b.s; });
    for (auto& sm : term.summands) {
      sm.start = term.dim;
      term.dim += sm.dim;
    }
  }

  for (const auto& [bd, src] : page.terms) {
    auto tit = page.terms.find({bd.first + 1, bd.second});
    if (tit == page.terms.end()) continue;
    const E1Term& tgt = tit->second;
    IntMatrix d(tgt.dim, src.dim);
    for (const auto& sm : src.summands) {
      // Restriction: (δx)_{I'} = Σ_h (-1)^{h-1} ι*(x_{I'∖{i'_h}}).
      if (const E1Summand* to = find_summand(tgt, sm.s); to && to->m == sm.m + 1) {
        for (const auto& I : sm.strata)
          for (int a = 1; a <= st.t(); ++a) {
            if (contains(I, a)) continue;
            const StratumKey up = with(I, a);
            if (!st.has(up)) continue;
            const int sign = position(I, a) % 2 == 1 ? 1 : -1;
            add_block(d, block_offset(*to, up), block_offset(sm, I), st.pullback(I, up).matrix(sm.k), sign);
          }
      }
      // Gysin: (γx)_J = Σ_{j∉J} (-1)^{h(j)-1} ι_*(x_{J∪{j}}).
      if (const E1Summand* to = find_summand(tgt, sm.s - 1); to && to->m == sm.m - 1) {
        for (const auto& Jp : sm.strata)
          for (int j : Jp) {
            const StratumKey J = without(Jp, j);
            const int sign = position(J, j) % 2 == 1 ? 1 : -1;
            add_block(d, block_offset(*to, J), block_offset(sm, Jp), st.pushforward(J, Jp).matrix(sm.k), sign);
          }
      }
    }
    page.d1.emplace(bd, std::move(d));
  }
  return page;
}

std::string basis_label(const E1Page& page, const E1Term& term, std::size_t idx) {
  for (const auto& sm : term.summands) {
    if (idx < sm.start || idx >= sm.start + sm.dim) continue;
    const std::size_t local = idx - sm.start;
    std::size_t b = sm.strata.size();
    while (b > 0 && sm.offsets[b - 1] > local) --b;
    const StratumKey& I = sm.strata[b - 1];
    const PresentationPtr& p = page.structure->stratum(I);
    return "s=" + std::to_string(sm.s) + " Y_" + key_string(I) + " " +
           p->name(p->offset(sm.k) + local - sm.offsets[b - 1]);
  }
  return "?";
}

std::vector<CheckResult> check_d1_squared(const E1Page& page) {
  std::vector<CheckResult> out;
  for (const auto& [bd, d] : page.d1) {
    auto next = page.d1.find({bd.first + 1, bd.second});
    if (next == page.d1.end()) continue;
    const IntMatrix sq = next->second * d;
    CheckResult r{"d1^2 " + bidegree_string(bd), true, {}};
    for (std::size_t c = 0; c < sq.cols() && r.pass; ++c)
      for (std::size_t row = 0; row < sq.rows(); ++row)
        if (sq(row, c) != 0) {
          r.pass = false;
          r.counterexample = bidegree_string(bd) + " basis " + std::to_string(c) + " [" +
                             basis_label(page, page.terms.at(bd), c) + "]";
          break;
        }
    out.push_back(std::move(r));
  }
  return out;
}

bool d1_squared_zero(const E1Page& page) {
  for (const auto& r : check_d1_squared(page))
    if (!r.pass) return false;
  return true;
}

std::map<Bidegree, std::size_t> e2_ranks(const E1Page& page) {
  if (!d1_squared_zero(page)) throw WssError("d1 does not square to zero");
  std::map<Bidegree, std::size_t> out;
  for (const auto& [bd, term] : page.terms) {
    std::size_t r = term.dim;
    if (auto it = page.d1.find(bd); it != page.d1.end()) r -= rank(it->second);
    if (auto it = page.d1.find({bd.first - 1, bd.second}); it != page.d1.end()) r -= rank(it->second);
    out[bd] = r;
  }
  return out;
}

std::vector<std::size_t> e2_totals(const E1Page& page) {
  const int n = page.structure->n();
  std::vector<std::size_t> totals(static_cast<std::size_t>(2 * (n - 1) + 1), 0);
  for (const auto& [bd, r] : e2_ranks(page)) {
    const int w = bd.first + bd.second;
    if (w < 0 || w >= static_cast<int>(totals.size())) {
      if (r != 0) throw WssError("E2 has a nonzero term outside degrees 0.." + std::to_string(totals.size() - 1));
      continue;
    }
    totals[w] += r;
  }
  return totals;
}

std::map<Bidegree, IntMatrix> corr_action_on_e1(const E1Page& page, const CorrespondenceFamily& f) {
  const IncidenceStructure& st = *page.structure;
  std::map<int, LevelMap> levels;
  for (int m = 1; m <= st.n(); ++m) {
    if (st.level_keys(m).empty()) continue;
    if (!f.sheets.empty() && f.depth() < m)
      throw FamilyError("family has no level " + std::to_string(m) + "; run the recursion first");
    levels[m] = f.level(m);
  }
  std::map<Bidegree, IntMatrix> out;
  for (const auto& [bd, term] : page.terms) {
    IntMatrix a(term.dim, term.dim);
    for (const auto& sm : term.summands) {
      if (sm.dim == 0) continue;
      const LevelMap& lvl = levels.at(sm.m);
      for (const auto& [key, cls] : lvl) {
        const StratumKey& I = key.first;
        const StratumKey& J = key.second;
        const PresentationPtr& pj = st.stratum(J);
        const std::size_t row0 = block_offset(sm, I);
        const std::size_t col0 = block_offset(sm, J);
        for (std::size_t b = 0; b < pj->rank(sm.k); ++b) {
          const ChowClass img = act_on(cls, ChowClass::basis(pj, pj->offset(sm.k) + b));
          for (std::size_t r = 0; r < img.coeffs().size(); ++r) a(row0 + r, col0 + b) += img.coeffs()[r];
        }
      }
    }
    out.emplace(bd, std::move(a));
  }
  return out;
}

std::vector<CheckResult> check_equivariance(const E1Page& page, const CorrespondenceFamily& f) {
  const auto action = corr_action_on_e1(page, f);
  std::vector<CheckResult> out;
  for (const auto& [bd, d] : page.d1) {
    const Bidegree to{bd.first + 1, bd.second};
    const IntMatrix diff = d * action.at(bd) - action.at(to) * d;
    CheckResult r{"equivariance " + bidegree_string(bd), true, {}};
    for (std::size_t c = 0; c < diff.cols() && r.pass; ++c)
      for (std::size_t row = 0; row < diff.rows(); ++row)
        if (diff(row, c) != 0) {
          r.pass = false;
          r.counterexample = bidegree_string(bd) + " basis " + std::to_string(c) + " [" +
                             basis_label(page, page.terms.at(bd), c) + "]";
          break;
        }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace strata
