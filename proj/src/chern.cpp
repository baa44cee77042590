#include "cbchern/chern.hpp"

#include <algorithm>
#include <numeric>

#include "cbchern/errors.hpp"

namespace cbchern {

namespace {

/// Expansion of (sum_i coeff_i psi_i)^j, multinomial coefficients included.
std::vector<std::pair<std::vector<int>, Rational>> linear_psi_power(const std::vector<Rational>& coeffs, int j) {
  const int n = static_cast<int>(coeffs.size());
  std::vector<std::pair<std::vector<int>, Rational>> out;
  std::vector<int> exps(n, 0);
  const Rational jfact = factorial(j);
  auto rec = [&](auto&& self, int i, int left, Rational acc) -> void {
    if (i == n - 1) {
      if (left > 0 && coeffs[i] == 0) return;
      exps[i] = left;
      Rational c = acc;
      for (int t = 0; t < left; ++t) c *= coeffs[i];
      c /= factorial(left);
      out.emplace_back(exps, c * jfact);
      exps[i] = 0;
      return;
    }
    Rational pw = 1;
    for (int e = 0; e <= left; ++e) {
      if (e > 0) {
        pw *= coeffs[i];
        if (pw == 0) break;
      }
      exps[i] = e;
      self(self, i + 1, left - e, acc * pw / factorial(e));
    }
    exps[i] = 0;
  };
  if (n > 0) rec(rec, 0, j, Rational(1));
  return out;
}

struct Assignment {
  std::vector<int> mu;  // index into the level-l weight list, per edge
  std::uint64_t rank_product = 0;
};

/// All attaching-weight assignments on the edges of a stratum whose vertex
/// ranks are all nonzero.
std::vector<Assignment> nonzero_assignments(const BundleSpec& spec, std::span<const PointSet> family,
                                            const std::vector<Weight>& level_weights) {
  const int n = spec.points();
  const StratumTree tree = stratum_tree(n, family);
  const std::size_t edges = family.size();
  const std::size_t vertices = tree.valence.size();

  std::vector<std::vector<Weight>> base(vertices);
  for (int p = 0; p < n; ++p) base[tree.point_owner[p]].push_back(spec.weights[p]);
  // A vertex's rank can be evaluated once its last incident edge is assigned.
  std::vector<std::vector<int>> incident(vertices);
  for (std::size_t e = 0; e < edges; ++e) {
    incident[e + 1].push_back(static_cast<int>(e));
    incident[tree.parent[e]].push_back(static_cast<int>(e));
  }
  std::vector<std::vector<int>> ready_after(edges);
  for (std::size_t v = 0; v < vertices; ++v) {
    if (incident[v].empty()) continue;
    ready_after[*std::max_element(incident[v].begin(), incident[v].end())].push_back(static_cast<int>(v));
  }

  std::vector<Assignment> out;
  if (edges == 0) {
    const std::uint64_t r = rank_of(spec.alg, spec.level, spec.weights);
    if (r != 0) out.push_back({{}, r});
    return out;
  }

  std::vector<int> choice(edges, 0);
  std::vector<Weight> scratch;
  auto vertex_rank = [&](int v) {
    scratch = base[v];
    for (int e : incident[v]) {
      const Weight& mu = level_weights[choice[e]];
      scratch.push_back(e + 1 == v ? mu : dual_weight(mu));
    }
    return rank_of(spec.alg, spec.level, scratch);
  };
  auto rec = [&](auto&& self, std::size_t e, std::uint64_t acc) -> void {
    if (e == edges) {
      out.push_back({choice, acc});
      return;
    }
    for (std::size_t i = 0; i < level_weights.size(); ++i) {
      choice[e] = static_cast<int>(i);
      std::uint64_t next = acc;
      for (int v : ready_after[e]) {
        next *= vertex_rank(v);
        if (next == 0) break;
      }
      if (next != 0) self(self, e + 1, next);
    }
  };
  rec(rec, 0, 1);
  return out;
}

ChowClass scaled_fundamental(int n, std::uint64_t r) { return ChowClass::fundamental(n, Rational(mpz_class(r))); }

}  // namespace

ChowClass first_chern(const BundleSpec& spec) {
  spec.validate();
  const int n = spec.points();
  ChowClass out(n);
  const std::uint64_t rk = rank_of(spec.alg, spec.level, spec.weights);
  if (rk != 0) {
    for (int i = 0; i < n; ++i) {
      const Rational w = casimir_w(spec.alg, spec.level, spec.weights[i]);
      TautMonomial m{std::vector<int>(n, 0), {}};
      m.psi[i] = 1;
      out.add(std::move(m), w * Rational(mpz_class(rk)));
    }
  }
  const std::vector<Weight> level_weights = enumerate_weights(spec.alg, spec.level);
  std::vector<Weight> side, rest;
  for (PointSet set : boundary_divisors(n)) {
    Rational coeff = 0;
    side.clear();
    rest.clear();
    for (int p = 1; p <= n; ++p) ((set & point_bit(p)) ? side : rest).push_back(spec.weights[p - 1]);
    for (const Weight& mu : level_weights) {
      const Rational w = casimir_w(spec.alg, spec.level, mu);
      if (w == 0) continue;
      side.push_back(mu);
      rest.push_back(dual_weight(mu));
      const std::uint64_t a = rank_of(spec.alg, spec.level, side);
      const std::uint64_t b = a == 0 ? 0 : rank_of(spec.alg, spec.level, rest);
      side.pop_back();
      rest.pop_back();
      if (a * b != 0) coeff += w * Rational(mpz_class(a * b));
    }
    if (coeff != 0) out.add(TautMonomial{std::vector<int>(n, 0), {{set, 1}}}, -coeff);
  }
  return out;
}

std::vector<ChowClass> power_sums(const BundleSpec& spec, int kmax) {
  spec.validate();
  if (kmax < 0) throw PreconditionError("negative power-sum index");
  const int n = spec.points();
  const std::vector<Weight> level_weights = enumerate_weights(spec.alg, spec.level);
  std::vector<Rational> mu_w;
  for (const Weight& mu : level_weights) mu_w.push_back(casimir_w(spec.alg, spec.level, mu));
  std::vector<Rational> leg_w;
  for (const Weight& lambda : spec.weights) leg_w.push_back(casimir_w(spec.alg, spec.level, lambda));

  std::vector<std::vector<std::pair<std::vector<int>, Rational>>> leg_powers;
  for (int j = 0; j <= kmax; ++j) leg_powers.push_back(linear_psi_power(leg_w, j));

  std::vector<ChowClass> out;
  out.push_back(scaled_fundamental(n, rank_of(spec.alg, spec.level, spec.weights)));
  for (int k = 1; k <= kmax; ++k) out.emplace_back(n);

  const int max_edges = std::min(kmax, std::max(0, n - 3));
  for (int m = 0; m <= max_edges; ++m) {
    for (const auto& family : compatible_families(n, m)) {
      const auto assignments = nonzero_assignments(spec, family, level_weights);
      if (assignments.empty()) continue;

      // Exponent vectors k_e >= 1 on the edges, total s <= kmax.
      std::vector<int> ke(m, 1);
      auto emit = [&](int s) {
        Rational edge_sum = 0;
        for (const Assignment& a : assignments) {
          Rational term(mpz_class(a.rank_product));
          for (int e = 0; e < m; ++e) {
            for (int t = 0; t < ke[e]; ++t) term *= mu_w[a.mu[e]];
            if (term == 0) break;
          }
          edge_sum += term;
        }
        if (edge_sum == 0) return;
        Rational edge_factor = edge_sum;
        for (int e = 0; e < m; ++e) edge_factor /= factorial(ke[e]);
        if (s % 2) edge_factor = -edge_factor;
        std::vector<std::pair<PointSet, int>> deltas;
        for (int e = 0; e < m; ++e) deltas.emplace_back(family[e], ke[e]);
        for (int k = std::max(s, 1); k <= kmax; ++k) {
          // k!/(k-s)! times the (k-s)-th power of the leg class, whose
          // expansion already carries its own multinomials.
          const Rational scale = edge_factor * factorial(k) / factorial(k - s);
          for (const auto& [psi, c] : leg_powers[k - s]) out[k].add(TautMonomial{psi, deltas}, scale * c);
        }
      };
      auto rec = [&](auto&& self, int e, int s) -> void {
        if (e == m) {
          emit(s);
          return;
        }
        for (int v = 1; s + v <= kmax; ++v) {
          ke[e] = v;
          self(self, e + 1, s + v);
        }
        ke[e] = 1;
      };
      rec(rec, 0, 0);
    }
  }
  return out;
}

ChowClass power_sum(const BundleSpec& spec, int k) {
  if (k < 1) throw PreconditionError("power sums are indexed from 1");
  return std::move(power_sums(spec, k)[k]);
}

ChowClass chern_character_part(const BundleSpec& spec, int k) {
  if (k < 0) throw PreconditionError("negative Chern character degree");
  if (k == 0) {
    spec.validate();
    return scaled_fundamental(spec.points(), rank_of(spec.alg, spec.level, spec.weights));
  }
  return power_sum(spec, k) * (Rational(1) / factorial(k));
}

ChowClass chern_from_power_sums(const std::vector<ChowClass>& p, int m) {
  if (p.empty()) throw PreconditionError("no power sums given");
  const int n = p.front().n();
  if (m == 0) return ChowClass::fundamental(n);
  if (static_cast<int>(p.size()) <= m) throw PreconditionError("not enough power sums");

  // Powers (-p_j)^e, built on demand.
  std::vector<std::vector<ChowClass>> neg_powers(m + 1);
  auto neg_power = [&](int j, int e) -> const ChowClass& {
    auto& cache = neg_powers[j];
    if (cache.empty()) cache.push_back(ChowClass::fundamental(n));
    while (static_cast<int>(cache.size()) <= e) {
      cache.push_back(drop_vanishing(product(cache.back(), p[j] * Rational(-1))));
    }
    return cache[e];
  };

  ChowClass out(n);
  std::vector<int> mult(m + 1, 0);
  auto rec = [&](auto&& self, int j, int left) -> void {
    if (j == 0) {
      if (left != 0) return;
      ChowClass term = ChowClass::fundamental(n);
      Rational scale = 1;
      for (int i = 1; i <= m; ++i) {
        if (mult[i] == 0) continue;
        term = drop_vanishing(product(term, neg_power(i, mult[i])));
        Rational denom = factorial(mult[i]);
        for (int t = 0; t < mult[i]; ++t) denom *= i;
        scale /= denom;
      }
      out += term * scale;
      return;
    }
    for (int e = 0; j * e <= left; ++e) {
      mult[j] = e;
      self(self, j - 1, left - j * e);
    }
    mult[j] = 0;
  };
  rec(rec, m, m);
  if (m % 2) out *= Rational(-1);
  return out;
}

std::vector<ChowClass> chern_classes(const BundleSpec& spec, int mmax) {
  const std::vector<ChowClass> p = power_sums(spec, mmax);
  std::vector<ChowClass> out;
  for (int m = 0; m <= mmax; ++m) out.push_back(chern_from_power_sums(p, m));
  return out;
}

ChowClass chern_class(const BundleSpec& spec, int m) {
  if (m < 0) throw PreconditionError("negative Chern class index");
  if (m == 0) {
    spec.validate();
    return ChowClass::fundamental(spec.points());
  }
  return chern_from_power_sums(power_sums(spec, m), m);
}

std::string to_string(LevelPosition p) {
  switch (p) {
    case LevelPosition::below: return "below";
    case LevelPosition::at: return "at";
    case LevelPosition::above: return "above";
  }
  return "?";
}

namespace {

LevelPosition compare_level(int level, const Rational& threshold) {
  const int c = cmp(Rational(level), threshold);
  return c < 0 ? LevelPosition::below : (c == 0 ? LevelPosition::at : LevelPosition::above);
}

}  // namespace

LevelReport levels(const BundleSpec& spec) {
  spec.validate();
  LevelReport report;
  int boxes = 0, theta = 0;
  for (const Weight& w : spec.weights) {
    boxes += w.boxes();
    theta += theta_pairing(w);
  }
  if (boxes % (spec.alg.r + 1) == 0) {
    report.critical_level = Rational(boxes / (spec.alg.r + 1) - 1);
    report.critical_position = compare_level(spec.level, *report.critical_level);
  }
  report.theta_level = Rational(theta, 2) - 1;
  report.theta_level.canonicalize();
  report.theta_position = compare_level(spec.level, report.theta_level);
  return report;
}

bool at_critical_level(const BundleSpec& spec) {
  const LevelReport report = levels(spec);
  return report.critical_position == LevelPosition::at;
}

BundleSpec partner(const BundleSpec& spec) {
  if (!at_critical_level(spec)) throw PreconditionError("bundle is not at its critical level");
  BundleSpec out{AlgebraSpec{spec.level}, spec.alg.r, {}};
  for (const Weight& w : spec.weights) out.weights.push_back(transpose_weight(spec.alg, spec.level, w));
  return out;
}

ChowClass partner_chern_expansion(const BundleSpec& spec, int k) {
  if (k < 1) throw PreconditionError("expansion degree must be positive");
  const BundleSpec other = partner(spec);
  const std::vector<ChowClass> c = chern_classes(other, k);
  const int n = spec.points();

  std::vector<std::vector<ChowClass>> powers(k + 1);
  auto class_power = [&](int i, int e) -> const ChowClass& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(ChowClass::fundamental(n));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(drop_vanishing(product(cache.back(), c[i])));
    return cache[e];
  };

  ChowClass out(n);
  std::vector<int> mult(k + 1, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == 0) {
      if (left != 0) return;
      const int total = std::accumulate(mult.begin(), mult.end(), 0);
      Rational scale = factorial(total);
      ChowClass term = ChowClass::fundamental(n);
      for (int j = 1; j <= k; ++j) {
        if (mult[j] == 0) continue;
        scale /= factorial(mult[j]);
        term = drop_vanishing(product(term, class_power(j, mult[j])));
      }
      if ((k - total) % 2) scale = -scale;
      out += term * scale;
      return;
    }
    for (int e = 0; i * e <= left; ++e) {
      mult[i] = e;
      self(self, i - 1, left - i * e);
    }
    mult[i] = 0;
  };
  rec(rec, k, k);
  return out;
}

bool VerificationReport::hypotheses_hold() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Hypothesis& h) { return h.holds; });
}

bool compare_with_witnesses(const ChowClass& lhs, const ChowClass& rhs, VerificationReport& report,
                            std::size_t max_witnesses) {
  const auto degree = lhs.degree() ? lhs.degree() : rhs.degree();
  const int codim = lhs.n() - 3 - degree.value_or(0);
  const auto families = compatible_families(lhs.n(), codim);
  const std::vector<Rational> a = pairing_vector(lhs, degree);
  const std::vector<Rational> b = pairing_vector(rhs, degree);
  bool equal = true;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < families.size(); ++i) {
    if (a[i] != b[i]) {
      equal = false;
      order.push_back(i);
    }
  }
  for (std::size_t i = 0; i < families.size() && order.size() < max_witnesses; ++i) {
    if (a[i] == b[i]) order.push_back(i);
  }
  order.resize(std::min(order.size(), max_witnesses));
  for (std::size_t i : order) report.witness_pairings.push_back({families[i], a[i], b[i]});
  return equal;
}

namespace {

struct AdditiveSetup {
  BundleSpec sum;
  std::uint64_t rank_nu = 0, rank_mu = 0, rank_sum = 0;
};

AdditiveSetup additive_hypotheses(const BundleSpec& nu, const BundleSpec& mu, VerificationReport& report) {
  nu.validate();
  mu.validate();
  if (nu.alg != mu.alg || nu.points() != mu.points()) {
    throw PreconditionError("additive identity needs the same algebra and number of points");
  }
  AdditiveSetup s;
  s.sum = BundleSpec{nu.alg, nu.level + mu.level, {}};
  for (int i = 0; i < nu.points(); ++i) {
    std::vector<int> labels(nu.alg.r);
    for (int j = 0; j < nu.alg.r; ++j) labels[j] = nu.weights[i][j] + mu.weights[i][j];
    s.sum.weights.emplace_back(std::move(labels));
  }
  s.rank_nu = rank(nu);
  s.rank_mu = rank(mu);
  s.rank_sum = rank(s.sum);
  report.hypotheses.push_back(
      {"rank(nu, l1) = 1", s.rank_nu == 1, "rank " + std::to_string(s.rank_nu)});
  report.hypotheses.push_back({"rank(mu, m1) = rank(nu+mu, l1+m1)", s.rank_mu == s.rank_sum && s.rank_mu > 0,
                               std::to_string(s.rank_mu) + " vs " + std::to_string(s.rank_sum)});
  return s;
}

template <typename Coefficient>
VerificationReport additive_check(const BundleSpec& nu, const BundleSpec& mu, int m, std::string identity,
                                  Coefficient coefficient) {
  if (m < 0) throw PreconditionError("negative Chern degree");
  VerificationReport report;
  report.identity = std::move(identity);
  const AdditiveSetup s = additive_hypotheses(nu, mu, report);
  if (!report.hypotheses_hold()) return report;
  const int delta = static_cast<int>(s.rank_mu);
  const int n = nu.points();

  const ChowClass lhs = chern_class(s.sum, m);
  const std::vector<ChowClass> c_mu = chern_classes(mu, m);
  const ChowClass c1_nu = first_chern(nu);
  ChowClass rhs(n);
  ChowClass c1_power = ChowClass::fundamental(n);
  for (int k = 0; k <= m; ++k) {
    if (k > 0) c1_power = drop_vanishing(product(c1_power, c1_nu));
    const Rational coeff = coefficient(m, delta, k);
    if (coeff != 0) rhs += drop_vanishing(product(c1_power, c_mu[m - k])) * coeff;
  }
  report.holds = compare_with_witnesses(lhs, rhs, report);
  return report;
}

}  // namespace

VerificationReport verify_additive(const BundleSpec& nu, const BundleSpec& mu, int m) {
  return additive_check(nu, mu, m, "additive: c_m(nu+mu) = sum_k binom(m+delta-k,k) c_1(nu)^k c_{m-k}(mu)",
                        [](int mm, int delta, int k) { return binomial(mm + delta - k, k); });
}

VerificationReport verify_line_twist(const BundleSpec& nu, const BundleSpec& mu, int m) {
  return additive_check(nu, mu, m, "line twist: c_m(nu+mu) = sum_k binom(delta-m+k,k) c_1(nu)^k c_{m-k}(mu)",
                        [](int mm, int delta, int k) { return binomial(delta - mm + k, k); });
}

VerificationReport verify_critical(const BundleSpec& spec, int k) {
  VerificationReport report;
  report.identity = "critical level: c_k(V) = sum (-1)^(k-N) multinomial prod c_i(partner)^(n_i)";
  const LevelReport lv = levels(spec);
  std::string detail = lv.critical_level ? "critical level " + to_string(*lv.critical_level) + ", level " +
                                               std::to_string(spec.level)
                                         : std::string("r+1 does not divide the box count");
  report.hypotheses.push_back({"level = critical level", lv.critical_position == LevelPosition::at, detail});
  if (!report.hypotheses_hold()) return report;
  report.holds = compare_with_witnesses(chern_class(spec, k), partner_chern_expansion(spec, k), report);
  return report;
}

VerificationReport verify_vanishing(const BundleSpec& spec, int kmax) {
  if (kmax < 1) throw PreconditionError("vanishing check needs k >= 1");
  VerificationReport report;
  const LevelReport lv = levels(spec);
  const bool above_critical = lv.critical_position == LevelPosition::above;
  const bool above_theta = lv.theta_position == LevelPosition::above;
  report.hypotheses.push_back(
      {"level above critical level", above_critical,
       lv.critical_level ? "critical level " + to_string(*lv.critical_level) : "critical level undefined"});
  report.hypotheses.push_back({"level above theta level", above_theta, "theta level " + to_string(lv.theta_level)});
  const int n = spec.points();
  const ChowClass zero(n);
  if (above_critical) {
    report.identity = "above critical level: [ch]_k = 0 for 1 <= k <= " + std::to_string(kmax);
    const std::vector<ChowClass> p = power_sums(spec, kmax);
    report.holds = true;
    for (int k = 1; k <= kmax; ++k) {
      report.holds = compare_with_witnesses(p[k], zero, report, 2) && report.holds;
    }
    report.hypotheses.erase(report.hypotheses.begin() + 1);
  } else if (above_theta) {
    report.identity = "above theta level: c_1 = 0";
    report.holds = compare_with_witnesses(first_chern(spec), zero, report);
    report.hypotheses.erase(report.hypotheses.begin());
  } else {
    report.identity = "vanishing above critical or theta level";
  }
  return report;
}

ExtremalityCertificate extremality_certificate(const BundleSpec& spec, int k, const NestedChain& partition) {
  spec.validate();
  if (partition.kind != NestedChain::Kind::fcycle) throw PreconditionError("extremality needs an F-cycle partition");
  if (partition.n != spec.points()) throw PreconditionError("partition is on the wrong number of points");
  if (k < 1 || static_cast<int>(partition.parts.size()) != k + 3) {
    throw PreconditionError("an F-cycle of dimension k needs k+3 parts");
  }
  partition.validate();
  if (k > spec.points() - 4) throw PreconditionError("F-cycle must have a part with at least two points");

  ExtremalityCertificate cert;
  cert.k = k;
  auto load = [&](PointSet part, bool theta) {
    int total = 0;
    for (int p : members(part)) total += theta ? theta_pairing(spec.weights[p - 1]) : spec.weights[p - 1].boxes();
    return total;
  };
  cert.parts = partition.parts;
  std::stable_sort(cert.parts.begin(), cert.parts.end(),
                   [&](PointSet a, PointSet b) { return load(a, false) < load(b, false); });
  for (int i = 0; i < k + 2; ++i) cert.box_sum += load(cert.parts[i], false);
  std::vector<int> theta_loads;
  for (PointSet part : partition.parts) theta_loads.push_back(load(part, true));
  std::sort(theta_loads.begin(), theta_loads.end());
  cert.theta_sum = std::accumulate(theta_loads.begin(), theta_loads.begin() + k + 2, 0);

  cert.critical_hypothesis = cert.box_sum <= spec.level + spec.alg.r;
  cert.theta_hypothesis_boxes = cert.box_sum <= spec.level + 1;
  cert.theta_hypothesis_theta = cert.theta_sum <= spec.level + 1;

  cert.stratum = stratum_family(partition);
  cert.pairing = pair_with_stratum(chern_class(spec, k), cert.stratum);
  return cert;
}

}  // namespace cbchern
