#pragma once

// Ranks of conformal-blocks bundles for sl(r+1): classical Littlewood-Richardson
// multiplicities, level truncation by Kac-Walton folding, and iterated
// factorization along a caterpillar.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "cbchern/weights.hpp"

namespace cbchern {

/// Identifies the bundle V(sl(r+1), weights, level) on M_{0,n}, n = weights.size().
struct BundleSpec {
  AlgebraSpec alg;
  int level = 1;
  std::vector<Weight> weights;

  int points() const { return static_cast<int>(weights.size()); }

  /// Throws PreconditionError unless n >= 3 and every weight is at `level`.
  void validate() const;

  friend auto operator<=>(const BundleSpec&, const BundleSpec&) = default;
};

/// Multiplicity of V_nu in V_lambda (x) V_mu for sl(r+1).
std::uint64_t lr_coefficient(AlgebraSpec alg, const Weight& lambda, const Weight& mu, const Weight& nu);

/// Classical decomposition of V_lambda (x) V_mu into irreducibles.
std::map<Weight, std::uint64_t> tensor_product(AlgebraSpec alg, const Weight& lambda, const Weight& mu);

/// Three-point rank N_{lambda mu nu} at level `level`: the multiplicity of
/// V_{nu*} in the level-truncated product lambda (x) mu. Symmetric in its
/// three weights; N(lambda, 0, nu) = [nu = lambda*].
std::uint64_t fusion_coefficient(AlgebraSpec alg, int level, const Weight& lambda, const Weight& mu,
                                 const Weight& nu);

/// Level-truncated product lambda (x)_level mu as a weight -> multiplicity map.
std::map<Weight, std::uint64_t> fusion_product(AlgebraSpec alg, int level, const Weight& lambda,
                                               const Weight& mu);

/// Rank of the bundle, fused left to right along the caterpillar and closed
/// with the vacuum pairing. Any n >= 1 is accepted (n = 1, 2 give the
/// propagation-of-vacua values).
std::uint64_t rank(const BundleSpec& spec);

/// Rank of V(alg, weights, level) without BundleSpec validation of n.
std::uint64_t rank_of(AlgebraSpec alg, int level, std::span<const Weight> weights);

/// Rank computed by factorizing once along the node separating the points in
/// `side` (indices into spec.weights) from the rest:
///   sum_mu rank(lambda_side, mu) * rank(lambda_rest, mu*).
std::uint64_t rank_factorized(const BundleSpec& spec, std::span<const int> side);

/// Independent sl(2) rank by dynamic programming over the interval rule
/// c in {|a-b|, ..., min(a+b, 2l-a-b)} step 2. Test oracle only.
std::uint64_t sl2_rank_oracle(const BundleSpec& spec);

/// Process-wide memo of three-point coefficients.
namespace fusion_cache {

std::size_t size();
void clear();
/// Loads "r l lambda mu nu -> N" records. Records that fail validation are
/// skipped; returns the number of records accepted.
std::size_t load(const std::filesystem::path& file);
void save(const std::filesystem::path& file);

}  // namespace fusion_cache

}  // namespace cbchern
