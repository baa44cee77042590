#pragma once

// Chern classes of conformal-blocks bundles on M_{0,n}: the first Chern class,
// power sums of Chern roots, Chern character parts, Chern classes via Newton's
// identities, critical/theta levels, partner bundles, and identity verifiers.

#include <optional>
#include <string>
#include <vector>

#include "cbchern/chow.hpp"
#include "cbchern/fusion.hpp"

namespace cbchern {

/// c_1 = rk * sum_i w(lambda_i) psi_i
///       - sum_{I, mu} w(mu) rk V(lambda_I, mu) rk V(lambda_{I^c}, mu*) delta_I.
ChowClass first_chern(const BundleSpec& spec);

/// p_k, the k-th power sum of the Chern roots, as a sum over boundary strata.
///
/// Every stratum with m <= k edges contributes, for each assignment of
/// attaching weights mu_e and exponents k_e >= 1 on its edges,
///
///   (-1)^{sum k_e} k! / ((k-s)! prod k_e!) * prod_v rk(v) * prod_e w(mu_e)^{k_e}
///     * prod_e delta_e^{k_e} * (sum_i w(lambda_i) psi_i)^{k-s},   s = sum k_e,
///
/// where rk(v) is the rank at the component v with its own marked points, mu_e
/// on the side of e away from point 1 and mu_e* on the other side.
ChowClass power_sum(const BundleSpec& spec, int k);

/// p_1 .. p_kmax (index 0 holds rank * [M_{0,n}]).
std::vector<ChowClass> power_sums(const BundleSpec& spec, int kmax);

/// [ch]_k = p_k / k!; [ch]_0 = rank * [M_{0,n}].
ChowClass chern_character_part(const BundleSpec& spec, int k);

/// c_m = (-1)^m sum_{m_1 + 2 m_2 + ... = m} prod_j (-p_j)^{m_j} / (m_j! j^{m_j}).
ChowClass chern_class(const BundleSpec& spec, int m);

/// Same closed form applied to given power sums (p[0] unused).
ChowClass chern_from_power_sums(const std::vector<ChowClass>& p, int m);

/// c_0 .. c_mmax sharing one power-sum computation.
std::vector<ChowClass> chern_classes(const BundleSpec& spec, int mmax);

enum class LevelPosition { below, at, above };
std::string to_string(LevelPosition p);

struct LevelReport {
  /// -1 + sum|lambda_i| / (r+1); absent unless r+1 divides the box count.
  std::optional<Rational> critical_level;
  /// -1 + (1/2) sum lambda_i(H_theta).
  Rational theta_level;
  std::optional<LevelPosition> critical_position;
  LevelPosition theta_position = LevelPosition::below;
};

LevelReport levels(const BundleSpec& spec);
bool at_critical_level(const BundleSpec& spec);

/// (sl(l+1), transposed weights, level r). Requires l = critical level.
BundleSpec partner(const BundleSpec& spec);

/// sum_{sum i n_i = k} (-1)^{k - N} N!/prod n_i! prod c_i(partner)^{n_i},
/// N = sum n_i. Numerically equal to c_k(spec) at the critical level.
ChowClass partner_chern_expansion(const BundleSpec& spec, int k);

struct Hypothesis {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct WitnessPairing {
  std::vector<PointSet> stratum;
  Rational lhs;
  Rational rhs;
};

/// Outcome of an identity check. A failed hypothesis means the identity was
/// not applicable; `holds` is only meaningful when all hypotheses hold.
struct VerificationReport {
  std::string identity;
  std::vector<Hypothesis> hypotheses;
  bool holds = false;
  std::vector<WitnessPairing> witness_pairings;

  bool hypotheses_hold() const;
};

/// Compares two classes stratum by stratum and records up to `max_witnesses`
/// pairings (all mismatching ones first).
bool compare_with_witnesses(const ChowClass& lhs, const ChowClass& rhs, VerificationReport& report,
                            std::size_t max_witnesses = 12);

/// Tensor-product identity for V(nu + mu, l1 + m1) = V(nu, l1) (x) V(mu, m1):
///   c_m = sum_k binom(m + delta - k, k) c_1(nu)^k c_{m-k}(mu).
VerificationReport verify_additive(const BundleSpec& nu, const BundleSpec& mu, int m);

/// The same hypotheses, checked against the Chern-root expansion of a twist
/// by a line bundle: c_m = sum_k binom(delta - m + k, k) c_1(nu)^k c_{m-k}(mu).
VerificationReport verify_line_twist(const BundleSpec& nu, const BundleSpec& mu, int m);

/// c_k(spec) against partner_chern_expansion(spec, k).
VerificationReport verify_critical(const BundleSpec& spec, int k);

/// Above the critical level every [ch]_j, 1 <= j <= kmax, vanishes; above the
/// theta level c_1 vanishes.
VerificationReport verify_vanishing(const BundleSpec& spec, int kmax);

struct ExtremalityCertificate {
  int k = 0;
  std::vector<PointSet> parts;       ///< sorted by box count lambda(J)
  std::vector<PointSet> stratum;     ///< boundary divisors cutting out Z_J
  int box_sum = 0;                   ///< sum_{i <= k+2} lambda(J_i), boxes
  int theta_sum = 0;                 ///< same with theta pairings
  bool critical_hypothesis = false;  ///< box_sum <= l + r
  bool theta_hypothesis_boxes = false;  ///< box_sum <= l + 1
  bool theta_hypothesis_theta = false;  ///< theta_sum <= l + 1
  Rational pairing;                  ///< integral of c_k over Z_J

  bool any_hypothesis() const {
    return critical_hypothesis || theta_hypothesis_boxes || theta_hypothesis_theta;
  }
  /// A certificate exists when some hypothesis holds and Z_J is contracted.
  bool certified() const { return any_hypothesis() && pairing == 0; }
};

ExtremalityCertificate extremality_certificate(const BundleSpec& spec, int k, const NestedChain& partition);

}  // namespace cbchern
