#pragma once

// Tautological intersection calculator on M_{0,n}: formal Q-linear
// combinations of monomials in psi classes and boundary divisors, their
// products, top-degree integration, and boundary strata / F-cycle classes.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cbchern/rational.hpp"

namespace cbchern {

inline constexpr int kMaxPoints = 20;

/// Subset of marked points {1..n}; bit (i-1) stands for point i.
using PointSet = std::uint32_t;

constexpr PointSet point_bit(int i) { return PointSet{1} << (i - 1); }
constexpr PointSet all_points(int n) { return n >= 32 ? ~PointSet{0} : (PointSet{1} << n) - 1; }
int popcount(PointSet s);
std::vector<int> members(PointSet s);
PointSet point_set(std::span<const int> points);

/// Canonical representative of delta_I: the side that does not contain point 1.
/// Throws PreconditionError unless 2 <= |I| <= n-2.
PointSet canonical_boundary(int n, PointSet set);

/// Two canonical boundary sets meet iff they are nested or disjoint.
bool compatible(PointSet a, PointSet b);

/// All canonical boundary divisors of M_{0,n}, in increasing (size, bits) order.
std::vector<PointSet> boundary_divisors(int n);

/// All families of `size` distinct, pairwise compatible boundary divisors
/// (i.e. all boundary strata of codimension `size`). Each family is sorted.
std::vector<std::vector<PointSet>> compatible_families(int n, int size);

/// Dual tree of the stratum cut out by distinct compatible boundary sets.
/// Vertex 0 is the component carrying point 1; vertex e+1 is the component on
/// the far side of edge e (the side holding the points of sets[e]).
struct StratumTree {
  std::vector<int> parent;       ///< per edge: its vertex on the point-1 side
  std::vector<int> valence;      ///< per vertex: marked points + half-edges
  std::vector<int> point_owner;  ///< per marked point (0-based): its vertex
};

StratumTree stratum_tree(int n, std::span<const PointSet> sets);

struct TautMonomial {
  std::vector<int> psi;                          ///< exponents k_1..k_n
  std::vector<std::pair<PointSet, int>> deltas;  ///< canonical set -> power, sorted by set

  int degree() const;
  friend auto operator<=>(const TautMonomial&, const TautMonomial&) = default;
};

class ChowClass {
 public:
  using Terms = std::map<TautMonomial, Rational>;

  explicit ChowClass(int n);

  static ChowClass fundamental(int n, const Rational& coeff = 1);
  static ChowClass psi(int n, int point);
  /// delta_I for any representative I (canonicalized).
  static ChowClass delta(int n, PointSet set);

  int n() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Common degree of all monomials; nullopt for the empty class.
  /// Throws PreconditionError if the class is not homogeneous.
  std::optional<int> degree() const;
  bool homogeneous() const;

  /// Adds coeff * m; the monomial's delta list must already be canonical.
  void add(const TautMonomial& m, const Rational& coeff);
  void add(TautMonomial&& m, const Rational& coeff);

  ChowClass& operator+=(const ChowClass& other);
  ChowClass& operator-=(const ChowClass& other);
  ChowClass& operator*=(const Rational& s);
  friend ChowClass operator+(ChowClass a, const ChowClass& b) { return a += b; }
  friend ChowClass operator-(ChowClass a, const ChowClass& b) { return a -= b; }
  friend ChowClass operator*(ChowClass a, const Rational& s) { return a *= s; }
  friend ChowClass operator*(const Rational& s, ChowClass a) { return a *= s; }

  /// Formal (coefficient-wise) equality.
  friend bool operator==(const ChowClass&, const ChowClass&) = default;

 private:
  int n_;
  Terms terms_;
};

/// Formal product: exponents add, no relations applied.
ChowClass product(const ChowClass& a, const ChowClass& b);
ChowClass power(const ChowClass& a, int k);

/// Removes monomials whose boundary factors do not pairwise meet; those
/// monomials are zero in the Chow ring.
ChowClass drop_vanishing(ChowClass c);

/// Intersection number of one top-degree monomial (no coefficient).
Rational integrate_monomial(int n, const TautMonomial& m);

/// Exact degree of a class all of whose monomials have degree n-3.
Rational integrate(const ChowClass& c);

/// Integral of c * delta_{family[0]} * ... (distinct boundary divisors).
Rational pair_with_stratum(const ChowClass& c, std::span<const PointSet> family);

/// Chain J_1 < ... < J_m built from disjoint parts (J_j = I_1 u ... u I_j), or
/// an F-cycle partition J_1, ..., J_{k+3} of {1..n}.
struct NestedChain {
  enum class Kind { chain, fcycle };
  Kind kind = Kind::fcycle;
  int n = 0;
  std::vector<PointSet> parts;

  /// Throws PreconditionError when the parts do not satisfy the invariants of
  /// their kind.
  void validate() const;
  /// Cumulative sets J_j (chain kind).
  std::vector<PointSet> cumulative() const;
  /// k for an F-cycle (number of parts minus 3).
  int fcycle_dimension() const { return static_cast<int>(parts.size()) - 3; }
};

/// Canonical boundary divisors whose product is the class of the stratum.
std::vector<PointSet> stratum_family(const NestedChain& chain);
ChowClass stratum_class(const NestedChain& chain);

/// Pairings of c with every boundary stratum of complementary dimension, in
/// the order of compatible_families(n, n-3-deg). The degree is taken from the
/// class unless given (needed for the empty class).
std::vector<Rational> pairing_vector(const ChowClass& c, std::optional<int> degree = std::nullopt);

/// Numerical equality: all pairings of a-b with complementary strata vanish.
bool classes_equal(const ChowClass& a, const ChowClass& b);

/// True iff every complementary pairing of c is zero.
bool numerically_zero(const ChowClass& c);

/// Relabels marked points: point i becomes perm[i-1] (1-based values).
ChowClass permute(const ChowClass& c, std::span<const int> perm);

/// Closed form (n-3)! / prod k_i! for a pure psi monomial of degree n-3.
Rational psi_multinomial(std::span<const int> exponents);

}  // namespace cbchern
