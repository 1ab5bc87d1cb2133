#include "strata/chow.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace strata {

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string monomial_name(const std::vector<int>& exps) {
  std::string s;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += 'h';
    if (exps.size() > 1) s += std::to_string(i + 1);
    if (exps[i] > 1) s += '^' + std::to_string(exps[i]);
  }
  return s.empty() ? "1" : s;
}

void add_scaled(std::vector<Integer>& acc, const Integer& s, const std::vector<Integer>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] += s * v[i];
}

}  // namespace

void ChowPresentation::index_basis(std::vector<std::vector<std::string>> basis) {
  if (dim_ < 0) throw std::invalid_argument("presentation dimension must be nonnegative");
  if (basis.size() != static_cast<std::size_t>(dim_) + 1)
    throw std::invalid_argument("presentation needs one basis list per codimension 0..dim");
  if (basis[0].size() != 1)
    throw std::invalid_argument("A^0 must have exactly one basis element (the unit)");
  offsets_.assign(basis.size() + 1, 0);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    offsets_[k + 1] = offsets_[k] + basis[k].size();
    for (auto& n : basis[k]) {
      if (!by_name_.emplace(n, names_.size()).second)
        throw std::invalid_argument("duplicate basis name '" + n + "'");
      names_.push_back(std::move(n));
      codims_.push_back(static_cast<int>(k));
    }
  }
  products_.assign(size() * size(), {});
}

std::size_t ChowPresentation::rank(int codim) const {
  if (codim < 0 || codim > dim_) return 0;
  return offsets_[codim + 1] - offsets_[codim];
}

std::optional<std::size_t> ChowPresentation::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t ChowPresentation::tensor_index(std::size_t a, std::size_t b) const {
  if (!is_tensor()) throw ChowError("tensor_index on a presentation that is not a tensor");
  return pair_to_global_.at(a * second_->size() + b);
}

PresentationPtr ChowPresentation::explicit_ring(int dim,
                                                std::vector<std::vector<std::string>> basis,
                                                const std::vector<ProductEntry>& products,
                                                std::vector<Integer> degree) {
  std::shared_ptr<ChowPresentation> p(new ChowPresentation());
  p->dim_ = dim;
  p->index_basis(std::move(basis));
  for (std::size_t a = 0; a < p->size(); ++a)
    for (std::size_t b = 0; b < p->size(); ++b)
      p->products_[a * p->size() + b].assign(p->rank(p->codims_[a] + p->codims_[b]), 0);
  for (const auto& e : products) {
    if (e.a >= p->size() || e.b >= p->size())
      throw std::invalid_argument("structure constant refers to an unknown basis element");
    const std::size_t want = p->rank(p->codims_[e.a] + p->codims_[e.b]);
    if (e.coeffs.size() != want)
      throw std::invalid_argument("structure constant for (" + p->names_[e.a] + ", " +
                                  p->names_[e.b] + ") must have " + std::to_string(want) +
                                  " coefficients");
    p->products_[e.a * p->size() + e.b] = e.coeffs;
    p->products_[e.b * p->size() + e.a] = e.coeffs;
  }
  if (degree.size() != p->rank(dim))
    throw std::invalid_argument("degree functional must cover the top codimension basis");
  p->degree_ = std::move(degree);

  std::ostringstream sig;
  sig << "E(" << dim << ";";
  for (std::size_t g = 0; g < p->size(); ++g) sig << p->codims_[g] << ':' << p->names_[g] << ';';
  for (std::size_t a = 0; a < p->size(); ++a)
    for (std::size_t b = a; b < p->size(); ++b) {
      const auto& c = p->product(a, b);
      if (std::all_of(c.begin(), c.end(), [](const Integer& v) { return v == 0; })) continue;
      sig << a << '*' << b << '=';
      for (const auto& v : c) sig << v.get_str() << ',';
      sig << ';';
    }
  sig << "deg=";
  for (const auto& v : p->degree_) sig << v.get_str() << ',';
  sig << ')';
  p->signature_ = sig.str();
  return p;
}

PresentationPtr ChowPresentation::projective_product(std::vector<int> dims) {
  for (int d : dims)
    if (d < 0) throw std::invalid_argument("projective space dimension must be nonnegative");
  const int dim = std::accumulate(dims.begin(), dims.end(), 0);

  // Enumerate exponent vectors, grouped by total degree; within a degree the
  // order is lexicographically descending (h1 before h2).
  std::vector<std::vector<int>> all;
  std::vector<int> cur(dims.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == dims.size()) {
      all.push_back(cur);
      return;
    }
    for (int e = dims[i]; e >= 0; --e) {
      cur[i] = e;
      rec(i + 1);
    }
  };
  rec(0);
  std::vector<std::vector<std::vector<int>>> by_codim(dim + 1);
  for (auto& e : all) by_codim[std::accumulate(e.begin(), e.end(), 0)].push_back(e);

  std::vector<std::vector<std::string>> basis(dim + 1);
  std::vector<std::vector<int>> exps;
  for (int k = 0; k <= dim; ++k)
    for (auto& e : by_codim[k]) {
      basis[k].push_back(monomial_name(e));
      exps.push_back(e);
    }

  std::shared_ptr<ChowPresentation> p(new ChowPresentation());
  p->dim_ = dim;
  p->index_basis(std::move(basis));
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t g = 0; g < exps.size(); ++g) index[exps[g]] = g;
  for (std::size_t a = 0; a < p->size(); ++a)
    for (std::size_t b = 0; b < p->size(); ++b) {
      const int k = p->codims_[a] + p->codims_[b];
      auto& out = p->products_[a * p->size() + b];
      out.assign(p->rank(k), 0);
      if (k > dim) continue;
      std::vector<int> e(dims.size());
      bool fits = true;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        e[i] = exps[a][i] + exps[b][i];
        fits = fits && e[i] <= dims[i];
      }
      if (fits) out[index.at(e) - p->offset(k)] = 1;
    }
  p->degree_.assign(1, 1);
  p->signature_ = "P(" + join_ints(dims) + ")";
  p->projective_dims_ = std::move(dims);
  return p;
}

PresentationPtr tensor(const PresentationPtr& p, const PresentationPtr& q) {
  const int dim = p->dim() + q->dim();
  std::vector<std::vector<std::string>> basis(dim + 1);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairs(dim + 1);
  for (std::size_t a = 0; a < p->size(); ++a)
    for (std::size_t b = 0; b < q->size(); ++b) {
      const int k = p->codim_of(a) + q->codim_of(b);
      basis[k].push_back(p->name(a) + "|" + q->name(b));
      pairs[k].emplace_back(a, b);
    }

  std::shared_ptr<ChowPresentation> t(new ChowPresentation());
  t->dim_ = dim;
  t->index_basis(std::move(basis));
  t->first_ = p;
  t->second_ = q;
  t->pair_to_global_.assign(p->size() * q->size(), 0);
  for (const auto& level : pairs)
    for (const auto& ab : level) {
      t->pair_to_global_[ab.first * q->size() + ab.second] = t->pairs_.size();
      t->pairs_.push_back(ab);
    }

  const std::size_t n = t->size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const auto [a1, b1] = t->pairs_[x];
      const auto [a2, b2] = t->pairs_[y];
      const int k = t->codims_[x] + t->codims_[y];
      auto& out = t->products_[x * n + y];
      out.assign(t->rank(k), 0);
      if (k > dim) continue;
      const auto& pa = p->product(a1, a2);
      const auto& qb = q->product(b1, b2);
      if (pa.empty() || qb.empty()) continue;
      const int ka = p->codim_of(a1) + p->codim_of(a2);
      const int kb = q->codim_of(b1) + q->codim_of(b2);
      for (std::size_t u = 0; u < pa.size(); ++u) {
        if (pa[u] == 0) continue;
        for (std::size_t v = 0; v < qb.size(); ++v) {
          if (qb[v] == 0) continue;
          const std::size_t g = t->pair_to_global_[(p->offset(ka) + u) * q->size() + q->offset(kb) + v];
          out[g - t->offset(k)] += pa[u] * qb[v];
        }
      }
    }

  t->degree_.assign(t->rank(dim), 0);
  for (std::size_t g = t->offset(dim); g < n; ++g) {
    const auto [a, b] = t->pairs_[g];
    t->degree_[g - t->offset(dim)] =
        p->degree_functional()[p->local_index(a)] * q->degree_functional()[q->local_index(b)];
  }
  t->signature_ = "T(" + p->signature() + "," + q->signature() + ")";
  return t;
}

std::vector<std::string> ChowPresentation::check() const {
  std::vector<std::string> out;
  const std::size_t n = size();
  for (std::size_t g = 0; g < n; ++g) {
    std::vector<Integer> e(rank(codims_[g]), 0);
    e[local_index(g)] = 1;
    if (product(unit(), g) != e) out.push_back("unit law fails on " + names_[g]);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (product(a, b) != product(b, a))
        out.push_back("not commutative on (" + names_[a] + ", " + names_[b] + ")");

  // (e_a e_b) e_c against e_a (e_b e_c)
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const int k = codims_[a] + codims_[b] + codims_[c];
        if (k > dim_) continue;
        std::vector<Integer> left(rank(k), 0);
        std::vector<Integer> right(rank(k), 0);
        const auto& ab = product(a, b);
        const std::size_t off_ab = offset(codims_[a] + codims_[b]);
        for (std::size_t u = 0; u < ab.size(); ++u)
          if (ab[u] != 0) add_scaled(left, ab[u], product(off_ab + u, c));
        const auto& bc = product(b, c);
        const std::size_t off_bc = offset(codims_[b] + codims_[c]);
        for (std::size_t u = 0; u < bc.size(); ++u)
          if (bc[u] != 0) add_scaled(right, bc[u], product(a, off_bc + u));
        if (left != right)
          out.push_back("not associative on (" + names_[a] + ", " + names_[b] + ", " +
                        names_[c] + ")");
      }
  return out;
}

bool same_presentation(const PresentationPtr& a, const PresentationPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->signature() == b->signature();
}

// ---------------------------------------------------------------------------

ChowClass::ChowClass(PresentationPtr p, int codim, std::vector<Integer> coeffs)
    : pres_(std::move(p)), codim_(codim), coeffs_(std::move(coeffs)) {
  if (!pres_) throw std::invalid_argument("ChowClass without presentation");
  if (coeffs_.size() != pres_->rank(codim_))
    throw std::invalid_argument("ChowClass of codim " + std::to_string(codim_) + " needs " +
                                std::to_string(pres_->rank(codim_)) + " coefficients, got " +
                                std::to_string(coeffs_.size()));
}

ChowClass ChowClass::zero(PresentationPtr p, int codim) {
  const std::size_t r = p->rank(codim);
  return ChowClass(std::move(p), codim, std::vector<Integer>(r, 0));
}

ChowClass ChowClass::basis(PresentationPtr p, std::size_t g) {
  const int k = p->codim_of(g);
  std::vector<Integer> c(p->rank(k), 0);
  c[p->local_index(g)] = 1;
  return ChowClass(std::move(p), k, std::move(c));
}

bool ChowClass::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Integer& v) { return v == 0; });
}

namespace {

void require_compatible(const ChowClass& a, const ChowClass& b, const char* op) {
  if (!same_presentation(a.presentation(), b.presentation()))
    throw PresentationMismatch(std::string(op) + ": classes live on different presentations");
  if (a.codim() != b.codim())
    throw PresentationMismatch(std::string(op) + ": codimensions differ (" +
                               std::to_string(a.codim()) + " vs " + std::to_string(b.codim()) +
                               ")");
}

}  // namespace

ChowClass& ChowClass::operator+=(const ChowClass& o) {
  require_compatible(*this, o, "sum");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

ChowClass& ChowClass::operator-=(const ChowClass& o) {
  require_compatible(*this, o, "difference");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

ChowClass ChowClass::operator-() const {
  ChowClass r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

ChowClass operator*(const Integer& s, const ChowClass& x) {
  ChowClass r = x;
  for (auto& c : r.coeffs_) c *= s;
  return r;
}

bool operator==(const ChowClass& a, const ChowClass& b) {
  return a.codim_ == b.codim_ && same_presentation(a.pres_, b.pres_) && a.coeffs_ == b.coeffs_;
}

std::string ChowClass::to_string() const {
  std::string s;
  const std::size_t off = pres_->rank(codim_) ? pres_->offset(codim_) : 0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Integer& c = coeffs_[i];
    if (c == 0) continue;
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    Integer a = abs(c);
    if (a != 1) s += a.get_str() + "*";
    s += pres_->name(off + i);
  }
  return s.empty() ? "0" : s;
}

ChowClass mul(const ChowClass& x, const ChowClass& y) {
  if (!same_presentation(x.presentation(), y.presentation()))
    throw PresentationMismatch("mul: classes live on different presentations");
  const auto& p = x.presentation();
  ChowClass out = ChowClass::zero(p, x.codim() + y.codim());
  if (out.coeffs().empty()) return out;
  std::vector<Integer> acc(out.coeffs().size(), 0);
  const std::size_t ox = p->offset(x.codim());
  const std::size_t oy = p->offset(y.codim());
  for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
    if (x.coeffs()[i] == 0) continue;
    for (std::size_t j = 0; j < y.coeffs().size(); ++j) {
      if (y.coeffs()[j] == 0) continue;
      add_scaled(acc, x.coeffs()[i] * y.coeffs()[j], p->product(ox + i, oy + j));
    }
  }
  return ChowClass(p, out.codim(), std::move(acc));
}

Integer degree(const ChowClass& x) {
  if (x.codim() != x.presentation()->dim()) return 0;
  Integer d = 0;
  const auto& f = x.presentation()->degree_functional();
  for (std::size_t i = 0; i < f.size(); ++i) d += f[i] * x.coeffs()[i];
  return d;
}

ChowClass outer(const ChowClass& x, const ChowClass& y) {
  return outer(x, y, tensor(x.presentation(), y.presentation()));
}

ChowClass outer(const ChowClass& x, const ChowClass& y, const PresentationPtr& target) {
  if (!target->is_tensor() || !same_presentation(target->first_factor(), x.presentation()) ||
      !same_presentation(target->second_factor(), y.presentation()))
    throw PresentationMismatch("outer: target is not the tensor of the factors");
  ChowClass out = ChowClass::zero(target, x.codim() + y.codim());
  if (out.coeffs().empty()) return out;
  std::vector<Integer> acc(out.coeffs().size(), 0);
  const std::size_t ox = x.presentation()->offset(x.codim());
  const std::size_t oy = y.presentation()->offset(y.codim());
  const std::size_t ot = target->offset(out.codim());
  for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
    if (x.coeffs()[i] == 0) continue;
    for (std::size_t j = 0; j < y.coeffs().size(); ++j)
      acc[target->tensor_index(ox + i, oy + j) - ot] += x.coeffs()[i] * y.coeffs()[j];
  }
  return ChowClass(target, out.codim(), std::move(acc));
}

// ---------------------------------------------------------------------------

GradedMap::GradedMap(MapKind kind, PresentationPtr source, PresentationPtr target, int shift,
                     std::vector<ChowClass> images)
    : kind_(kind),
      source_(std::move(source)),
      target_(std::move(target)),
      shift_(shift),
      images_(std::move(images)) {
  if (kind_ == MapKind::ring && shift_ != 0)
    throw std::invalid_argument("ring maps preserve codimension");
  if (images_.size() != source_->size())
    throw std::invalid_argument("graded map needs one image per source basis element");
  for (std::size_t g = 0; g < images_.size(); ++g) {
    if (!same_presentation(images_[g].presentation(), target_))
      throw PresentationMismatch("graded map image does not live on the target");
    if (images_[g].codim() != source_->codim_of(g) + shift_)
      throw std::invalid_argument("image of " + source_->name(g) + " has codim " +
                                  std::to_string(images_[g].codim()) + ", expected " +
                                  std::to_string(source_->codim_of(g) + shift_));
  }
}

GradedMap GradedMap::identity(const PresentationPtr& p) {
  std::vector<ChowClass> images;
  images.reserve(p->size());
  for (std::size_t g = 0; g < p->size(); ++g) images.push_back(ChowClass::basis(p, g));
  return GradedMap(MapKind::ring, p, p, 0, std::move(images));
}

IntMatrix GradedMap::matrix(int codim) const {
  const std::size_t cols = source_->rank(codim);
  const std::size_t rows = target_->rank(codim + shift_);
  IntMatrix m(rows, cols);
  if (cols == 0 || rows == 0) return m;
  const std::size_t off = source_->offset(codim);
  for (std::size_t c = 0; c < cols; ++c) {
    const auto& img = images_[off + c].coeffs();
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = img[r];
  }
  return m;
}

std::vector<std::string> GradedMap::check_ring_map() const {
  std::vector<std::string> out;
  if (images_[source_->unit()] != ChowClass::unit(target_)) out.push_back("unit is not sent to unit");
  for (std::size_t a = 0; a < source_->size(); ++a)
    for (std::size_t b = a; b < source_->size(); ++b) {
      const ChowClass lhs = apply(*this, mul(ChowClass::basis(source_, a), ChowClass::basis(source_, b)));
      const ChowClass rhs = mul(images_[a], images_[b]);
      if (lhs != rhs)
        out.push_back("not multiplicative on (" + source_->name(a) + ", " + source_->name(b) + ")");
    }
  return out;
}

bool operator==(const GradedMap& a, const GradedMap& b) {
  if (a.kind_ != b.kind_ || a.shift_ != b.shift_ || !same_presentation(a.source_, b.source_) ||
      !same_presentation(a.target_, b.target_))
    return false;
  for (std::size_t g = 0; g < a.images_.size(); ++g)
    if (a.images_[g] != b.images_[g]) return false;
  return true;
}

ChowClass apply(const GradedMap& m, const ChowClass& x) {
  if (!same_presentation(x.presentation(), m.source()))
    throw PresentationMismatch("apply: class does not live on the map's source");
  ChowClass out = ChowClass::zero(m.target(), x.codim() + m.shift());
  if (x.coeffs().empty()) return out;
  std::vector<Integer> acc(out.coeffs().size(), 0);
  const std::size_t off = m.source()->offset(x.codim());
  for (std::size_t i = 0; i < x.coeffs().size(); ++i)
    if (x.coeffs()[i] != 0) add_scaled(acc, x.coeffs()[i], m.image(off + i).coeffs());
  return ChowClass(m.target(), out.codim(), std::move(acc));
}

GradedMap compose(const GradedMap& g, const GradedMap& f) {
  if (!same_presentation(f.target(), g.source()))
    throw PresentationMismatch("compose: maps are not composable");
  std::vector<ChowClass> images;
  images.reserve(f.source()->size());
  for (std::size_t x = 0; x < f.source()->size(); ++x) images.push_back(apply(g, f.image(x)));
  const MapKind kind =
      f.kind() == MapKind::ring && g.kind() == MapKind::ring ? MapKind::ring : MapKind::additive;
  return GradedMap(kind, f.source(), g.target(), f.shift() + g.shift(), std::move(images));
}

GradedMap tensor_map(const GradedMap& f, const GradedMap& g) {
  return tensor_map(f, g, tensor(f.source(), g.source()), tensor(f.target(), g.target()));
}

GradedMap tensor_map(const GradedMap& f, const GradedMap& g, const PresentationPtr& src,
                     const PresentationPtr& dst) {
  if (f.kind() != g.kind()) throw ChowError("tensor_map: map kinds differ");
  if (!src->is_tensor() || !same_presentation(src->first_factor(), f.source()) ||
      !same_presentation(src->second_factor(), g.source()))
    throw PresentationMismatch("tensor_map: source is not the tensor of the map sources");
  std::vector<ChowClass> images;
  images.reserve(src->size());
  for (std::size_t x = 0; x < src->size(); ++x) {
    const auto [a, b] = src->factor_indices(x);
    images.push_back(outer(f.image(a), g.image(b), dst));
  }
  return GradedMap(f.kind(), src, dst, f.shift() + g.shift(), std::move(images));
}

GradedMap proj_pushforward(const PresentationPtr& tensor_pres, bool keep_first) {
  if (!tensor_pres->is_tensor()) throw ChowError("proj_pushforward: source is not a tensor presentation");
  const PresentationPtr& kept = keep_first ? tensor_pres->first_factor() : tensor_pres->second_factor();
  const PresentationPtr& gone = keep_first ? tensor_pres->second_factor() : tensor_pres->first_factor();
  const int shift = -gone->dim();
  std::vector<ChowClass> images;
  images.reserve(tensor_pres->size());
  for (std::size_t x = 0; x < tensor_pres->size(); ++x) {
    const auto [a, b] = tensor_pres->factor_indices(x);
    const std::size_t k = keep_first ? a : b;
    const std::size_t d = keep_first ? b : a;
    ChowClass img = ChowClass::zero(kept, tensor_pres->codim_of(x) + shift);
    if (gone->codim_of(d) == gone->dim())
      img = gone->degree_functional()[gone->local_index(d)] * ChowClass::basis(kept, k);
    images.push_back(std::move(img));
  }
  return GradedMap(MapKind::additive, tensor_pres, kept, shift, std::move(images));
}

IntMatrix pairing_matrix(const PresentationPtr& p, int k) {
  const std::size_t rows = p->rank(k);
  const std::size_t cols = p->rank(p->dim() - k);
  IntMatrix m(rows, cols);
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < cols; ++b)
      m(a, b) = degree(mul(ChowClass::basis(p, p->offset(k) + a),
                           ChowClass::basis(p, p->offset(p->dim() - k) + b)));
  return m;
}

ChowClass graph_class(const GradedMap& phi) {
  if (phi.kind() != MapKind::ring) throw ChowError("graph_class needs a ring map");
  const PresentationPtr& q = phi.source();
  const PresentationPtr& p = phi.target();
  if (p->dim() != q->dim()) throw ChowError("graph_class: source and target dimensions differ");
  const int d = q->dim();
  const PresentationPtr t = tensor(p, q);
  std::vector<Integer> acc(t->rank(d), 0);
  for (int k = 0; k <= d; ++k) {
    // Coefficients C_k on A^k(P) ⊗ A^{d-k}(Q) satisfy C_k * M = Phi_k with
    // M = pairing_matrix(Q, d-k).
    const auto inv = inverse(pairing_matrix(q, d - k));
    if (!inv)
      throw NonUnimodularPairing("intersection pairing in codimension " + std::to_string(d - k) +
                                 " is not unimodular");
    const IntMatrix c = phi.matrix(k) * *inv;
    for (std::size_t a = 0; a < c.rows(); ++a)
      for (std::size_t b = 0; b < c.cols(); ++b)
        acc[t->tensor_index(p->offset(k) + a, q->offset(d - k) + b) - t->offset(d)] += c(a, b);
  }
  return ChowClass(t, d, std::move(acc));
}

ChowClass diagonal_class(const PresentationPtr& p) { return graph_class(GradedMap::identity(p)); }

ChowClass act_on(const ChowClass& gamma, const ChowClass& x) {
  const PresentationPtr& t = gamma.presentation();
  if (!t->is_tensor()) throw ChowError("act_on: correspondence must live on a tensor presentation");
  const ChowClass lifted = outer(ChowClass::unit(t->first_factor()), x, t);
  return apply(proj_pushforward(t, true), mul(gamma, lifted));
}

}  // namespace strata
