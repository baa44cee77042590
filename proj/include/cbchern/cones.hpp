#pragma once

// Bases of Pic(M_{0,n}) built from conformal-blocks bundles and generators of
// subcones of the Pliant cone.

#include <string>
#include <vector>

#include "cbchern/chern.hpp"

namespace cbchern {

enum class BasisKind { fakhruddin, sl2_levels, level_one_fundamental };

std::string to_string(BasisKind kind);
/// Accepts "fakhruddin", "b1" / "sl2_levels", "b2" / "level_one_fundamental".
BasisKind parse_basis_kind(std::string_view text);

struct BasisFamily {
  BasisKind kind = BasisKind::fakhruddin;
  int n = 0;
  std::vector<BundleSpec> members;
  std::vector<std::uint64_t> ranks;
  /// Member has a zero weight, so its classes are pulled back along a
  /// forgetful map.
  std::vector<bool> pulled_back;
};

/// V(sl2, lambda, 1), lambda_i in {0, omega_1}, an even number >= 4 of them
/// nonzero. Members are ordered by decreasing support bitmask.
BasisFamily fakhruddin_basis(int n);

/// B1: V(sl2, omega_1^n, l), 1 <= l <= g, n = 2(g+1) (a zero weight appended
/// for odd n). B2: V(sl(n), omega_i^n, 1), 2 <= i <= floor(n/2).
BasisFamily invariant_basis(int n, BasisKind kind);

BasisFamily basis(int n, BasisKind kind);

/// Schur class of `partition` in the Chern roots: det(c_{lambda'_i - i + j})
/// with lambda' the conjugate partition, so s_(1^k) = c_k.
ChowClass schur_class(const BundleSpec& spec, const std::vector<int>& partition);

/// Same determinant evaluated on precomputed Chern classes c[0..].
ChowClass schur_from_chern(const std::vector<ChowClass>& c, const std::vector<int>& partition);

struct PliantGenerators {
  /// Multisets of member indices, one per raw monomial, in lexicographic order.
  std::vector<std::vector<int>> raw_indices;
  std::vector<ChowClass> raw;
  /// Indices into `raw` kept after merging numerically equal monomials.
  std::vector<std::size_t> kept;
};

/// All degree-m monomials in the first Chern classes of the family members.
PliantGenerators pliant_generators(int n, int m, const BasisFamily& family);

}  // namespace cbchern
