#pragma once

// Exact model of Chow rings of smooth proper cellular varieties.
//
// A presentation is a finite graded free Z-module A = ⊕_k A^k with a
// commutative multiplication given by structure constants, a unit spanning
// A^0, and a degree functional on the top group A^dim. Cohomology of the
// modelled variety is identified with A ⊗ Q (odd cohomology vanishes).

#include "strata/integer_linalg.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace strata {

class ChowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PresentationMismatch : public ChowError {
 public:
  using ChowError::ChowError;
};

class NonUnimodularPairing : public ChowError {
 public:
  using ChowError::ChowError;
};

class ChowPresentation;
using PresentationPtr = std::shared_ptr<const ChowPresentation>;

class ChowPresentation {
 public:
  /// One structure constant: e_a * e_b expanded over the basis of
  /// A^{codim a + codim b}. Indices are global basis indices.
  struct ProductEntry {
    std::size_t a = 0;
    std::size_t b = 0;
    std::vector<Integer> coeffs;
  };

  /// Builds a presentation from hand-written data. `basis[k]` names the basis
  /// of A^k; `products` lists e_a * e_b for a <= b (omitted pairs multiply to
  /// zero, the mirrored pair is filled in); `degree` covers A^dim.
  /// Throws std::invalid_argument on malformed shapes.
  static PresentationPtr explicit_ring(int dim, std::vector<std::vector<std::string>> basis,
                                       const std::vector<ProductEntry>& products,
                                       std::vector<Integer> degree);

  /// A(P^{d_1} x ... x P^{d_r}) = Z[h_1..h_r]/(h_i^{d_i+1}), monomial basis.
  static PresentationPtr projective_product(std::vector<int> dims);
  static PresentationPtr point() { return projective_product({}); }
  static PresentationPtr projective_space(int d) { return projective_product({d}); }

  friend PresentationPtr tensor(const PresentationPtr& p, const PresentationPtr& q);

  int dim() const { return dim_; }
  std::size_t size() const { return names_.size(); }
  /// Size of the A^k basis; 0 outside [0, dim].
  std::size_t rank(int codim) const;
  std::size_t offset(int codim) const { return offsets_.at(static_cast<std::size_t>(codim)); }
  int codim_of(std::size_t g) const { return codims_[g]; }
  std::size_t local_index(std::size_t g) const { return g - offset(codims_[g]); }
  const std::string& name(std::size_t g) const { return names_[g]; }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Global index of the unit (the only basis element of A^0).
  std::size_t unit() const { return 0; }

  /// e_a * e_b over the A^{codim a + codim b} basis; empty above dim.
  const std::vector<Integer>& product(std::size_t a, std::size_t b) const {
    return products_[a * size() + b];
  }
  const std::vector<Integer>& degree_functional() const { return degree_; }

  bool is_tensor() const { return first_ != nullptr; }
  const PresentationPtr& first_factor() const { return first_; }
  const PresentationPtr& second_factor() const { return second_; }
  /// For a tensor presentation: the factor indices (a, b) of basis element g.
  std::pair<std::size_t, std::size_t> factor_indices(std::size_t g) const { return pairs_.at(g); }
  /// For a tensor presentation: the global index of e_a ⊗ e_b.
  std::size_t tensor_index(std::size_t a, std::size_t b) const;

  /// Set for presentations built by projective_product.
  const std::optional<std::vector<int>>& projective_dims() const { return projective_dims_; }

  /// Canonical description; two presentations are the same iff their
  /// signatures agree.
  const std::string& signature() const { return signature_; }

  /// Ring-law violations (unit, commutativity, associativity) found by
  /// checking every basis pair and triple. Empty when the laws hold.
  std::vector<std::string> check() const;

 private:
  ChowPresentation() = default;
  void index_basis(std::vector<std::vector<std::string>> basis);

  int dim_ = 0;
  std::vector<std::string> names_;
  std::vector<int> codims_;
  std::vector<std::size_t> offsets_;  // size dim+2; offsets_[k+1]-offsets_[k] = rank(k)
  std::vector<std::vector<Integer>> products_;
  std::vector<Integer> degree_;
  std::unordered_map<std::string, std::size_t> by_name_;

  PresentationPtr first_;
  PresentationPtr second_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::size_t> pair_to_global_;  // first.size() x second.size()

  std::optional<std::vector<int>> projective_dims_;
  std::string signature_;
};

bool same_presentation(const PresentationPtr& a, const PresentationPtr& b);

/// Künneth presentation of a product: basis e_a ⊗ e_b graded by total codim.
PresentationPtr tensor(const PresentationPtr& p, const PresentationPtr& q);

class ChowClass {
 public:
  /// Throws std::invalid_argument unless coeffs has rank(codim) entries.
  ChowClass(PresentationPtr p, int codim, std::vector<Integer> coeffs);

  static ChowClass zero(PresentationPtr p, int codim);
  static ChowClass basis(PresentationPtr p, std::size_t g);
  static ChowClass unit(PresentationPtr p) { return basis(std::move(p), 0); }

  const PresentationPtr& presentation() const { return pres_; }
  int codim() const { return codim_; }
  const std::vector<Integer>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  ChowClass& operator+=(const ChowClass& o);
  ChowClass& operator-=(const ChowClass& o);
  ChowClass operator-() const;
  friend ChowClass operator+(ChowClass a, const ChowClass& b) { return a += b; }
  friend ChowClass operator-(ChowClass a, const ChowClass& b) { return a -= b; }
  friend ChowClass operator*(const Integer& s, const ChowClass& x);
  friend bool operator==(const ChowClass& a, const ChowClass& b);

  /// e.g. "h|1 + 2*1|h", or "0".
  std::string to_string() const;

 private:
  PresentationPtr pres_;
  int codim_;
  std::vector<Integer> coeffs_;
};

/// Throws PresentationMismatch unless x and y share a presentation.
ChowClass mul(const ChowClass& x, const ChowClass& y);

/// Degree functional on the top-codimension part; 0 below top codimension.
Integer degree(const ChowClass& x);

/// x ⊗ y on tensor(x.presentation, y.presentation), or on `target` when given
/// (which must be that tensor presentation).
ChowClass outer(const ChowClass& x, const ChowClass& y);
ChowClass outer(const ChowClass& x, const ChowClass& y, const PresentationPtr& target);

enum class MapKind { ring, additive };

/// A graded linear map between presentations, given by basis images.
/// Ring maps preserve codimension; additive maps shift it by `shift`.
class GradedMap {
 public:
  GradedMap(MapKind kind, PresentationPtr source, PresentationPtr target, int shift,
            std::vector<ChowClass> images);

  static GradedMap identity(const PresentationPtr& p);

  MapKind kind() const { return kind_; }
  const PresentationPtr& source() const { return source_; }
  const PresentationPtr& target() const { return target_; }
  int shift() const { return shift_; }
  const ChowClass& image(std::size_t g) const { return images_[g]; }

  /// Matrix of A^k(source) -> A^{k+shift}(target), columns indexed by source.
  IntMatrix matrix(int codim) const;

  /// Unit and multiplicativity violations; empty for a valid ring map.
  std::vector<std::string> check_ring_map() const;

  friend bool operator==(const GradedMap& a, const GradedMap& b);

 private:
  MapKind kind_;
  PresentationPtr source_;
  PresentationPtr target_;
  int shift_;
  std::vector<ChowClass> images_;
};

/// Linear extension of the basis images. Throws PresentationMismatch.
ChowClass apply(const GradedMap& m, const ChowClass& x);

/// g ∘ f. Throws PresentationMismatch unless f.target is g.source.
GradedMap compose(const GradedMap& g, const GradedMap& f);

/// f ⊗ g on the tensor presentations. Throws ChowError on kind mismatch.
GradedMap tensor_map(const GradedMap& f, const GradedMap& g);
/// Same, reusing already built tensor presentations for source and target.
GradedMap tensor_map(const GradedMap& f, const GradedMap& g, const PresentationPtr& src,
                     const PresentationPtr& dst);

/// Integrates out one factor of a tensor presentation against its degree
/// functional: e_a ⊗ e_b ↦ deg(e_b) e_a (keep_first) or deg(e_a) e_b.
GradedMap proj_pushforward(const PresentationPtr& tensor_pres, bool keep_first);

/// Entries deg(e_a * e_b) for e_a in A^k, e_b in A^{dim-k}.
IntMatrix pairing_matrix(const PresentationPtr& p, int k);

/// The class of the diagonal on tensor(p, p): the unique class with
/// pr_1*(Δ · (1 ⊗ x)) = x. Throws NonUnimodularPairing.
ChowClass diagonal_class(const PresentationPtr& p);

/// Class on tensor(phi.target, phi.source) acting by phi: for a ring map
/// phi: A(Q) -> A(P) between presentations of equal dimension, returns Γ with
/// pr_1*(Γ · (1 ⊗ x)) = phi(x). The diagonal is graph_class(identity).
ChowClass graph_class(const GradedMap& phi);

/// pr_1*(gamma · (1 ⊗ x)) for gamma on tensor(P, Q) and x on Q.
ChowClass act_on(const ChowClass& gamma, const ChowClass& x);

}  // namespace strata
