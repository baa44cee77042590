#pragma once

// Type-A weight lattice: dominant weights of sl(r+1) as Dynkin labels, with
// the partition (Young diagram) view, duals, transposes and Casimir scalars.

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "cbchern/rational.hpp"

namespace cbchern {

/// The algebra sl(r+1). `r` is the Lie rank.
struct AlgebraSpec {
  int r = 1;

  int dual_coxeter() const { return r + 1; }
  std::string name() const { return "sl" + std::to_string(r + 1); }

  friend auto operator<=>(const AlgebraSpec&, const AlgebraSpec&) = default;
};

/// A dominant integral weight of sl(r+1), stored as Dynkin labels (a_1..a_r).
class Weight {
 public:
  Weight() = default;
  explicit Weight(std::vector<int> labels);

  static Weight zero(int r);
  /// multiple * omega_i, 1 <= i <= r.
  static Weight fundamental(int r, int i, int multiple = 1);
  /// Builds the weight of sl(r+1) whose diagram has the given row lengths.
  /// Columns of height r+1 are deleted; more than r+1 rows is an error.
  static Weight from_partition(int r, std::span<const int> rows);

  int r() const { return static_cast<int>(labels_.size()); }
  const std::vector<int>& labels() const { return labels_; }
  int operator[](std::size_t i) const { return labels_[i]; }

  /// Row lengths lambda_i = a_i + ... + a_r, i = 1..r (trailing zeros kept).
  std::vector<int> partition() const;
  /// |lambda|, the number of boxes of the diagram.
  int boxes() const;
  bool is_zero() const;

  std::string str() const;

  friend auto operator<=>(const Weight&, const Weight&) = default;

 private:
  std::vector<int> labels_;
};

/// All weights with a_1 + ... + a_r <= level, sorted lexicographically.
std::vector<Weight> enumerate_weights(AlgebraSpec alg, int level);

/// lambda(H_theta) = a_1 + ... + a_r.
int theta_pairing(const Weight& lambda);

bool at_level(AlgebraSpec alg, int level, const Weight& lambda);

/// Invariant form (omega_i, omega_j) = min(i,j) - ij/(r+1), normalized so
/// that (theta, theta) = 2.
Rational inner_product(AlgebraSpec alg, const Weight& a, const Weight& b);

/// w(lambda) = (lambda, lambda + 2 rho) / (2 (r + 1 + level)).
Rational casimir_w(AlgebraSpec alg, int level, const Weight& lambda);

/// Reverses the Dynkin labels.
Weight dual_weight(const Weight& lambda);

/// Transposes the diagram of a level-`level` weight of sl(r+1); the result is
/// a weight of sl(level+1) at level r.
Weight transpose_weight(AlgebraSpec alg, int level, const Weight& lambda);

/// Parses "2,0,1" (or "0" for the zero weight of any rank).
Weight parse_weight(AlgebraSpec alg, std::string_view text);

}  // namespace cbchern
