#include <doctest.h>

#include "cbchern/chern.hpp"
#include "cbchern/errors.hpp"

using namespace cbchern;

namespace {

Weight W(std::vector<int> labels) { return Weight(std::move(labels)); }

BundleSpec sl2(int level, std::vector<int> labels) {
  BundleSpec s{{1}, level, {}};
  for (int a : labels) s.weights.push_back(W({a}));
  return s;
}

const BundleSpec kWorked = sl2(2, {1, 1, 1, 1, 2});

}  // namespace

TEST_CASE("first Chern class of the rank two bundle on M_{0,5}") {
  const int n = 5;
  ChowClass expected(n);
  for (int i = 1; i <= 4; ++i) expected += ChowClass::psi(n, i) * Rational(3, 8);
  expected += ChowClass::psi(n, 5);
  for (int i = 1; i <= 4; ++i) {
    expected -= ChowClass::delta(n, point_bit(i) | point_bit(5)) * Rational(3, 8);
    for (int j = i + 1; j <= 4; ++j) expected -= ChowClass::delta(n, point_bit(i) | point_bit(j)) * Rational(1, 2);
  }
  const ChowClass c1 = first_chern(kWorked);
  CHECK(c1 == expected);
  CHECK(integrate(product(c1, c1)) == 1);
}

TEST_CASE("worked numbers on M_{0,5}") {
  CHECK(integrate(power_sum(kWorked, 2)) == -1);
  CHECK(integrate(chern_character_part(kWorked, 2)) == Rational(-1, 2));
  CHECK(integrate(chern_class(kWorked, 2)) == 1);
  const ChowClass c1 = first_chern(kWorked);
  CHECK(classes_equal(chern_class(kWorked, 2), product(c1, c1)));
  CHECK(classes_equal(power_sum(kWorked, 1), c1));
  CHECK(classes_equal(chern_class(kWorked, 1), c1));
  CHECK(chern_character_part(kWorked, 0) == ChowClass::fundamental(5, 2));
  CHECK(chern_class(kWorked, 0) == ChowClass::fundamental(5));
}

TEST_CASE("rank zero bundles have zero classes") {
  const BundleSpec s = sl2(1, {1, 1, 1, 0, 0});
  CHECK(rank(s) == 0);
  CHECK(first_chern(s).empty());
  CHECK(power_sum(s, 2).empty());
}

TEST_CASE("levels") {
  const LevelReport a = levels(kWorked);
  REQUIRE(a.critical_level.has_value());
  CHECK(*a.critical_level == 2);
  CHECK(a.critical_position == LevelPosition::at);
  CHECK(levels(sl2(3, {1, 1, 1, 1, 1, 1})).theta_level == 2);
  CHECK(levels(sl2(3, {1, 1, 1, 1, 1, 1})).critical_position == LevelPosition::above);
  BundleSpec odd{{2}, 2, std::vector<Weight>(5, W({1, 0}))};
  CHECK_FALSE(levels(odd).critical_level.has_value());
  CHECK(levels(odd).theta_level == Rational(3, 2));
}

TEST_CASE("partners") {
  const BundleSpec p = partner(kWorked);
  CHECK(p.alg.r == 2);
  CHECK(p.level == 1);
  CHECK(p.weights == std::vector<Weight>{W({1, 0}), W({1, 0}), W({1, 0}), W({1, 0}), W({0, 1})});
  CHECK(partner(p) == kWorked);
  CHECK(rank(p) == 1);
  // (sl2, m-1, omega_1^{2m}) pairs with (sl(m), 1, omega_1^{2m}).
  for (int m = 2; m <= 4; ++m) {
    const BundleSpec q = partner(sl2(m - 1, std::vector<int>(2 * m, 1)));
    CHECK(q.alg.r == m - 1);
    CHECK(q.level == 1);
    CHECK(q.weights == std::vector<Weight>(2 * m, Weight::fundamental(m - 1, 1)));
  }
  CHECK_THROWS_AS(partner(sl2(3, {1, 1, 1, 1})), PreconditionError);
  CHECK(classes_equal(first_chern(kWorked), first_chern(p)));
  CHECK(classes_equal(partner_chern_expansion(kWorked, 1), first_chern(kWorked)));
  CHECK(integrate(partner_chern_expansion(kWorked, 2)) == 1);
}

TEST_CASE("critical level identity") {
  const VerificationReport r = verify_critical(kWorked, 2);
  CHECK(r.hypotheses_hold());
  CHECK(r.holds);
  const BundleSpec above = sl2(3, {1, 1, 1, 1, 1, 1});
  const VerificationReport bad = verify_critical(above, 2);
  CHECK_FALSE(bad.hypotheses_hold());
  CHECK_FALSE(bad.holds);
  // A partner of rank 8: the expansion still matches.
  BundleSpec v1{{2}, 2, {W({2, 0}), W({2, 0}), W({1, 0}), W({1, 0}), W({1, 0}), W({1, 0}), W({1, 0})}};
  CHECK(rank(partner(v1)) == 8);
  CHECK(verify_critical(v1, 2).holds);
}

TEST_CASE("vanishing") {
  const VerificationReport above = verify_vanishing(sl2(3, {1, 1, 1, 1, 1, 1}), 3);
  CHECK(above.hypotheses_hold());
  CHECK(above.holds);
  // sl4, omega_2^4 at level 2 sits above both levels.
  BundleSpec s{{3}, 2, std::vector<Weight>(4, Weight::fundamental(3, 2))};
  CHECK(verify_vanishing(s, 1).holds);
  CHECK(numerically_zero(first_chern(s)));
  const VerificationReport at = verify_vanishing(kWorked, 2);
  CHECK_FALSE(at.hypotheses_hold());
}

TEST_CASE("additive identity bookkeeping") {
  AlgebraSpec a{2};
  BundleSpec nu{a, 1, {W({1, 0}), W({1, 0}), W({1, 0}), W({1, 0}), W({1, 0}), W({1, 0}), W({0, 0})}};
  BundleSpec mu{a, 2, {W({2, 0}), W({2, 0}), W({1, 0}), W({1, 0}), W({1, 0}), W({1, 0}), W({1, 0})}};
  const VerificationReport zero = verify_additive(nu, mu, 0);
  CHECK(zero.hypotheses_hold());
  CHECK(zero.holds);
  CHECK(verify_line_twist(nu, mu, 1).holds);
  CHECK(verify_line_twist(nu, mu, 2).holds);
  // Swapping the roles breaks the rank-one hypothesis.
  const VerificationReport swapped = verify_additive(mu, nu, 2);
  CHECK_FALSE(swapped.hypotheses_hold());
  CHECK_THROWS_AS(verify_additive(nu, sl2(1, {1, 1, 1, 1, 1, 1, 0}), 1), PreconditionError);
}

TEST_CASE("extremality certificates") {
  const BundleSpec s = sl2(3, std::vector<int>(8, 1));
  NestedChain parts{NestedChain::Kind::fcycle, 8,
                    {point_bit(1), point_bit(2), point_bit(3), point_bit(4),
                     point_bit(5) | point_bit(6) | point_bit(7) | point_bit(8)}};
  const ExtremalityCertificate cert = extremality_certificate(s, 2, parts);
  CHECK(cert.box_sum == 4);
  CHECK(cert.critical_hypothesis);
  CHECK(cert.theta_hypothesis_boxes);
  CHECK(cert.pairing == 0);
  CHECK(cert.certified());
  CHECK_THROWS_AS(extremality_certificate(s, 1, parts), PreconditionError);
  NestedChain five{NestedChain::Kind::fcycle, 5,
                   {point_bit(1), point_bit(2), point_bit(3), point_bit(4), point_bit(5)}};
  CHECK_THROWS_AS(extremality_certificate(kWorked, 2, five), PreconditionError);
}
