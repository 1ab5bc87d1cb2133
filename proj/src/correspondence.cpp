#include "strata/correspondence.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <optional>
#include <thread>

namespace strata {

namespace {

std::string describe(SolverError::Kind kind, int level, const StratumKey& I,
                     const std::string& sheet, const std::string& context) {
  std::string s = kind == SolverError::Kind::inconsistent ? "inconsistent data" : "non-unique decomposition";
  s += " at level " + std::to_string(level) + ", I = " + key_string(I);
  if (!sheet.empty()) s += ", sheet '" + sheet + "'";
  if (!context.empty()) s = context + ": " + s;
  return s;
}

Integer sign(std::size_t exponent) { return exponent % 2 == 0 ? 1 : -1; }

void add_into(LevelMap& acc, const PairKey& k, const ChowClass& c) {
  auto it = acc.find(k);
  if (it == acc.end())
    acc.emplace(k, c);
  else
    it->second += c;
}

void drop_zeros(LevelMap& m) {
  for (auto it = m.begin(); it != m.end();) {
    if (it->second.is_zero())
      it = m.erase(it);
    else
      ++it;
  }
}

// Runs fn(0..count-1) on up to `threads` workers. The exception of the
// lowest failing index is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::size_t w = 0; w < n; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

SolverError::SolverError(Kind kind, int level, StratumKey I, std::string sheet, std::string context)
    : std::runtime_error(describe(kind, level, I, sheet, context)),
      kind_(kind),
      level_(level),
      I_(std::move(I)),
      sheet_(std::move(sheet)),
      context_(std::move(context)) {}

void rethrow_with_context(const SolverError& e, const std::string& context) {
  const std::string ctx = e.context().empty() ? context : context + ": " + e.context();
  if (e.kind() == SolverError::Kind::inconsistent) throw InconsistentData(e.level(), e.I(), e.sheet(), ctx);
  throw NonUniqueDecomposition(e.level(), e.I(), e.sheet(), ctx);
}

int CorrespondenceFamily::depth() const {
  if (sheets.empty()) return 0;
  std::size_t d = sheets.front().levels.size();
  for (const auto& sh : sheets) d = std::min(d, sh.levels.size());
  return static_cast<int>(d);
}

LevelMap CorrespondenceFamily::level(int m) const {
  LevelMap out;
  for (const auto& sh : sheets) {
    if (m < 1 || static_cast<std::size_t>(m) > sh.levels.size())
      throw FamilyError("family has no level " + std::to_string(m) + " in sheet '" + sh.label + "'");
    for (const auto& [k, c] : sh.levels[m - 1]) add_into(out, k, c);
  }
  drop_zeros(out);
  return out;
}

std::set<std::pair<int, int>> sheet_relation(const Sheet& sheet) {
  std::set<std::pair<int, int>> r;
  if (sheet.levels.empty()) return r;
  for (const auto& [k, c] : sheet.levels[0])
    if (!c.is_zero()) r.emplace(k.first.front(), k.second.front());
  return r;
}

bool in_support(const std::set<std::pair<int, int>>& relation, const StratumKey& I,
                const StratumKey& J) {
  if (I.size() != J.size()) return false;
  std::vector<bool> used(J.size(), false);
  std::function<bool(std::size_t)> match = [&](std::size_t a) {
    if (a == I.size()) return true;
    for (std::size_t b = 0; b < J.size(); ++b) {
      if (used[b] || !relation.count({I[a], J[b]})) continue;
      used[b] = true;
      if (match(a + 1)) return true;
      used[b] = false;
    }
    return false;
  };
  return match(0);
}

void check_family(const IncidenceStructure& s, const CorrespondenceFamily& f) {
  for (const auto& sh : f.sheets) {
    for (std::size_t l = 0; l < sh.levels.size(); ++l) {
      const int m = static_cast<int>(l) + 1;
      for (const auto& [k, c] : sh.levels[l]) {
        const std::string where = "sheet '" + sh.label + "', level " + std::to_string(m) + ", (" +
                                  key_string(k.first) + ", " + key_string(k.second) + ")";
        if (static_cast<int>(k.first.size()) != m || static_cast<int>(k.second.size()) != m)
          throw FamilyError(where + ": keys must have " + std::to_string(m) + " elements");
        if (!s.has(k.first) || !s.has(k.second))
          throw FamilyError(where + ": stratum is absent");
        if (!same_presentation(c.presentation(), s.product(k.first, k.second)))
          throw FamilyError(where + ": class does not live on Y_I x Y_J");
        if (c.codim() != s.n() - m)
          throw FamilyError(where + ": codim " + std::to_string(c.codim()) + ", expected " +
                            std::to_string(s.n() - m));
      }
    }
  }
}

CorrespondenceFamily scaled(const CorrespondenceFamily& f, const Integer& c) {
  CorrespondenceFamily out = f;
  for (auto& sh : out.sheets)
    for (auto& lvl : sh.levels) {
      for (auto& [k, cls] : lvl) cls = c * cls;
      drop_zeros(lvl);
    }
  if (c == 0) out.sheets.clear();
  return out;
}

CorrespondenceFamily sum(const CorrespondenceFamily& a, const CorrespondenceFamily& b) {
  if (!a.sheets.empty() && !b.sheets.empty() && a.depth() != b.depth())
    throw FamilyError("cannot add families of different depth");
  CorrespondenceFamily out = a;
  out.sheets.insert(out.sheets.end(), b.sheets.begin(), b.sheets.end());
  return out;
}

LevelOneInput level_one(const CorrespondenceFamily& f) {
  LevelOneInput out;
  for (const auto& sh : f.sheets) {
    if (sh.levels.empty()) throw FamilyError("sheet '" + sh.label + "' has no level 1");
    out.sheets.push_back(Sheet{sh.label, {sh.levels[0]}});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Solves the level-m system of one sheet for one I.
LevelMap solve_block(const IncidenceStructure& s, const Sheet& sheet,
                     const std::set<std::pair<int, int>>& relation, int m, const StratumKey& I) {
  const int codim = s.n() - m;
  const LevelMap& prev = sheet.levels[m - 2];

  std::vector<StratumKey> unknowns;
  for (const auto& J : s.level_keys(m))
    if (in_support(relation, I, J)) unknowns.push_back(J);
  std::vector<std::size_t> col_off{0};
  for (const auto& J : unknowns) col_off.push_back(col_off.back() + s.product(I, J)->rank(codim));

  // Equations live in codim n - m + 1 on Y_{I,J}, |J| = m - 1.
  const std::vector<StratumKey> eq_keys = s.level_keys(m - 1);
  std::vector<std::size_t> row_off{0};
  for (const auto& J : eq_keys) row_off.push_back(row_off.back() + s.product(I, J)->rank(codim + 1));

  IntMatrix a(row_off.back(), col_off.back());
  std::vector<Integer> b(row_off.back());
  for (std::size_t e = 0; e < eq_keys.size(); ++e) {
    const StratumKey& J = eq_keys[e];
    // Σ_h (-1)^h gysin_first(Γ_{I∖{i_h}, J})
    for (std::size_t h = 1; h <= I.size(); ++h) {
      auto it = prev.find({without(I, I[h - 1]), J});
      if (it == prev.end()) continue;
      const ChowClass img = apply(gysin_first(s, I, I[h - 1], J), it->second);
      const Integer sg = sign(h);
      for (std::size_t r = 0; r < img.coeffs().size(); ++r) b[row_off[e] + r] += sg * img.coeffs()[r];
    }
    // Σ_j (-1)^{h(j)} push_second(Γ_{I, J∪{j}})
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      const StratumKey& Jp = unknowns[u];
      if (!std::includes(Jp.begin(), Jp.end(), J.begin(), J.end())) continue;
      int j = 0;
      for (int x : Jp)
        if (!contains(J, x)) j = x;
      const IntMatrix blk = push_second(s, I, J, j).matrix(codim);
      const Integer sg = sign(position(J, j));
      for (std::size_t r = 0; r < blk.rows(); ++r)
        for (std::size_t c = 0; c < blk.cols(); ++c) a(row_off[e] + r, col_off[u] + c) = sg * blk(r, c);
    }
  }

  const SolveResult res = solve_unique(a, b);
  if (std::holds_alternative<NoSolution>(res)) throw InconsistentData(m, I, sheet.label);
  if (std::holds_alternative<NonUnique>(res)) throw NonUniqueDecomposition(m, I, sheet.label);
  const auto& x = std::get<std::vector<Integer>>(res);
  LevelMap out;
  for (std::size_t u = 0; u < unknowns.size(); ++u) {
    std::vector<Integer> coeffs(x.begin() + col_off[u], x.begin() + col_off[u + 1]);
    ChowClass c(s.product(I, unknowns[u]), codim, std::move(coeffs));
    if (!c.is_zero()) out.emplace(PairKey{I, unknowns[u]}, std::move(c));
  }
  return out;
}

}  // namespace

CorrespondenceFamily compute_all_levels(const IncidenceStructure& s, const LevelOneInput& g1,
                                        const SolveOptions& opts) {
  check_family(s, g1);
  int top = opts.max_level <= 0 ? s.n() : std::min(opts.max_level, s.n());
  CorrespondenceFamily out;
  std::vector<std::set<std::pair<int, int>>> relations;
  for (const auto& sh : g1.sheets) {
    if (sh.levels.empty()) throw FamilyError("sheet '" + sh.label + "' has no level 1");
    Sheet copy{sh.label, {sh.levels[0]}};
    drop_zeros(copy.levels[0]);
    relations.push_back(sheet_relation(copy));
    out.sheets.push_back(std::move(copy));
  }

  for (int m = 2; m <= top; ++m) {
    const std::vector<StratumKey> keys = s.level_keys(m);
    const std::size_t per_sheet = keys.size();
    std::vector<LevelMap> results(out.sheets.size() * per_sheet);
    parallel_for(results.size(), opts.threads, [&](std::size_t task) {
      const std::size_t sh = task / per_sheet;
      results[task] = solve_block(s, out.sheets[sh], relations[sh], m, keys[task % per_sheet]);
    });
    for (std::size_t sh = 0; sh < out.sheets.size(); ++sh) {
      LevelMap lvl;
      for (std::size_t k = 0; k < per_sheet; ++k) lvl.merge(results[sh * per_sheet + k]);
      out.sheets[sh].levels.push_back(std::move(lvl));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

LevelMap compose_level(const IncidenceStructure& s, const LevelMap& a, const LevelMap& b, int m) {
  const int codim = s.n() - m;
  LevelMap out;
  for (const auto& [ka, ca] : a) {
    const StratumKey& I = ka.first;
    const StratumKey& J = ka.second;
    const PresentationPtr& pj = s.stratum(J);
    for (auto it = b.lower_bound({J, {}}); it != b.end() && it->first.first == J; ++it) {
      const StratumKey& K = it->first.second;
      const ChowClass& cb = it->second;
      const PresentationPtr target = s.product(I, K);
      std::vector<Integer> acc(target->rank(codim), 0);
      const PresentationPtr& pa = ca.presentation();
      const PresentationPtr& pb = cb.presentation();
      const std::size_t oa = pa->offset(ca.codim());
      const std::size_t ob = pb->offset(cb.codim());
      const std::size_t ot = target->rank(codim) ? target->offset(codim) : 0;
      for (std::size_t x = 0; x < ca.coeffs().size(); ++x) {
        if (ca.coeffs()[x] == 0) continue;
        const auto [u, v] = pa->factor_indices(oa + x);
        for (std::size_t y = 0; y < cb.coeffs().size(); ++y) {
          if (cb.coeffs()[y] == 0) continue;
          const auto [v2, w] = pb->factor_indices(ob + y);
          if (pj->codim_of(v) + pj->codim_of(v2) != pj->dim()) continue;
          const Integer d = degree(mul(ChowClass::basis(pj, v), ChowClass::basis(pj, v2)));
          if (d == 0) continue;
          acc[target->tensor_index(u, w) - ot] += ca.coeffs()[x] * cb.coeffs()[y] * d;
        }
      }
      add_into(out, {I, K}, ChowClass(target, codim, std::move(acc)));
    }
  }
  drop_zeros(out);
  return out;
}

LevelOneInput compose_inputs(const IncidenceStructure& s, const LevelOneInput& a,
                             const LevelOneInput& b) {
  LevelOneInput out;
  for (const auto& sb : b.sheets)
    for (const auto& sa : a.sheets) {
      if (sa.levels.empty() || sb.levels.empty()) throw FamilyError("composition needs level 1");
      LevelMap c = compose_level(s, sa.levels[0], sb.levels[0], 1);
      if (c.empty()) continue;
      out.sheets.push_back(Sheet{sb.label + " o " + sa.label, {std::move(c)}});
    }
  return out;
}

CompositionReport check_composition(const IncidenceStructure& s, const LevelOneInput& a,
                                    const LevelOneInput& b, const SolveOptions& opts) {
  auto run = [&](const LevelOneInput& in, const char* name) {
    try {
      return compute_all_levels(s, level_one(in), opts);
    } catch (const SolverError& e) {
      rethrow_with_context(e, name);
    }
  };
  const CorrespondenceFamily fa = run(a, "first");
  const CorrespondenceFamily fb = run(b, "second");
  const CorrespondenceFamily fc = run(compose_inputs(s, level_one(a), level_one(b)), "composite");

  CompositionReport rep;
  const int top = opts.max_level <= 0 ? s.n() : std::min(opts.max_level, s.n());
  for (int m = 1; m <= top; ++m) {
    const LevelMap expected = fc.level(m);
    const LevelMap actual = compose_level(s, fa.level(m), fb.level(m), m);
    for (const auto& I : s.level_keys(m))
      for (const auto& K : s.level_keys(m)) {
        ++rep.compared;
        auto e = expected.find({I, K});
        auto g = actual.find({I, K});
        const bool has_e = e != expected.end();
        const bool has_g = g != actual.end();
        if (!has_e && !has_g) continue;
        if (has_e && has_g && e->second == g->second) continue;
        rep.pass = false;
        rep.mismatches.push_back(Mismatch{m, I, K, has_e ? e->second.to_string() : "0",
                                          has_g ? g->second.to_string() : "0"});
      }
  }
  return rep;
}

std::map<StratumKey, ChowClass> act(const IncidenceStructure& s, const CorrespondenceFamily& f,
                                    int m, const StratumKey& J, const ChowClass& x) {
  if (!same_presentation(x.presentation(), s.stratum(J)))
    throw FamilyError("act: class does not live on Y_" + key_string(J));
  std::map<StratumKey, ChowClass> out;
  const LevelMap lvl = f.level(m);
  for (const auto& I : s.level_keys(m)) {
    auto it = lvl.find({I, J});
    if (it == lvl.end())
      out.emplace(I, ChowClass::zero(s.stratum(I), x.codim()));
    else
      out.emplace(I, act_on(it->second, x));
  }
  return out;
}

TransposeReport transpose_check(const IncidenceStructure& s, const CorrespondenceFamily& f) {
  TransposeReport rep;
  const int top = f.sheets.empty() ? s.n() : f.depth();
  for (int m = 2; m <= top; ++m) {
    const LevelMap lo = f.level(m - 1);
    const LevelMap hi = f.level(m);
    const int codim = s.n() - m + 1;
    for (const auto& I : s.level_keys(m - 1))
      for (const auto& J : s.level_keys(m)) {
        ChowClass lhs = ChowClass::zero(s.product(I, J), codim);
        ChowClass rhs = lhs;
        for (std::size_t h = 1; h <= J.size(); ++h) {
          auto it = lo.find({I, without(J, J[h - 1])});
          if (it != lo.end()) lhs += sign(h) * apply(gysin_second(s, I, J, J[h - 1]), it->second);
        }
        for (int i = 1; i <= s.t(); ++i) {
          if (contains(I, i)) continue;
          auto it = hi.find({with(I, i), J});
          if (it != hi.end()) rhs += sign(position(I, i)) * apply(push_first(s, I, i, J), it->second);
        }
        if (lhs != rhs) {
          rep.pass = false;
          rep.failures.push_back("(" + key_string(I) + ", " + key_string(J) + "): " + lhs.to_string() +
                                 " vs " + rhs.to_string());
        }
      }
  }
  return rep;
}

}  // namespace strata
