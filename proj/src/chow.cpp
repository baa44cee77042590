#include "cbchern/chow.hpp"

#include <algorithm>
#include <bit>
#include <future>
#include <numeric>
#include <thread>

#include "cbchern/errors.hpp"

namespace cbchern {

int popcount(PointSet s) { return std::popcount(s); }

std::vector<int> members(PointSet s) {
  std::vector<int> out;
  for (int i = 1; s != 0; ++i, s >>= 1) {
    if (s & 1U) out.push_back(i);
  }
  return out;
}

PointSet point_set(std::span<const int> points) {
  PointSet s = 0;
  for (int p : points) {
    if (p < 1 || p > kMaxPoints) throw PreconditionError("marked point out of range");
    s |= point_bit(p);
  }
  return s;
}

PointSet canonical_boundary(int n, PointSet set) {
  if (n < 4 || n > kMaxPoints) throw PreconditionError("boundary divisors need 4 <= n <= 20");
  if ((set & ~all_points(n)) != 0) throw PreconditionError("boundary set mentions a point beyond n");
  const int size = popcount(set);
  if (size < 2 || size > n - 2) throw PreconditionError("boundary set must have 2..n-2 points");
  return (set & 1U) ? (all_points(n) & ~set) : set;
}

bool compatible(PointSet a, PointSet b) {
  const PointSet both = a & b;
  return both == 0 || both == a || both == b;
}

std::vector<PointSet> boundary_divisors(int n) {
  std::vector<PointSet> out;
  if (n < 4) return out;
  // Subsets of {2..n}.
  for (PointSet s = 0; s <= all_points(n - 1); ++s) {
    const PointSet set = s << 1;
    const int size = popcount(set);
    if (size >= 2 && size <= n - 2) out.push_back(set);
  }
  std::sort(out.begin(), out.end(), [](PointSet a, PointSet b) {
    const int pa = popcount(a), pb = popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  return out;
}

std::vector<std::vector<PointSet>> compatible_families(int n, int size) {
  std::vector<std::vector<PointSet>> out;
  if (size < 0) return out;
  if (size == 0) {
    out.emplace_back();
    return out;
  }
  const std::vector<PointSet> divisors = boundary_divisors(n);
  std::vector<PointSet> current;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<int>(current.size()) == size) {
      out.push_back(current);
      return;
    }
    for (std::size_t i = start; i < divisors.size(); ++i) {
      const PointSet d = divisors[i];
      if (!std::all_of(current.begin(), current.end(), [d](PointSet e) { return compatible(d, e); })) continue;
      current.push_back(d);
      self(self, i + 1);
      current.pop_back();
    }
  };
  rec(rec, 0);
  for (auto& family : out) std::sort(family.begin(), family.end());
  return out;
}

int TautMonomial::degree() const {
  int d = std::accumulate(psi.begin(), psi.end(), 0);
  for (const auto& [set, power] : deltas) d += power;
  return d;
}

ChowClass::ChowClass(int n) : n_(n) {
  if (n < 3 || n > kMaxPoints) throw PreconditionError("M_{0,n} needs 3 <= n <= 20");
}

ChowClass ChowClass::fundamental(int n, const Rational& coeff) {
  ChowClass c(n);
  c.add(TautMonomial{std::vector<int>(n, 0), {}}, coeff);
  return c;
}

ChowClass ChowClass::psi(int n, int point) {
  if (point < 1 || point > n) throw PreconditionError("psi index out of range");
  ChowClass c(n);
  TautMonomial m{std::vector<int>(n, 0), {}};
  m.psi[point - 1] = 1;
  c.add(std::move(m), 1);
  return c;
}

ChowClass ChowClass::delta(int n, PointSet set) {
  ChowClass c(n);
  c.add(TautMonomial{std::vector<int>(n, 0), {{canonical_boundary(n, set), 1}}}, 1);
  return c;
}

std::optional<int> ChowClass::degree() const {
  if (terms_.empty()) return std::nullopt;
  const int d = terms_.begin()->first.degree();
  for (const auto& [m, coeff] : terms_) {
    if (m.degree() != d) throw PreconditionError("class is not homogeneous");
  }
  return d;
}

bool ChowClass::homogeneous() const {
  try {
    (void)degree();
    return true;
  } catch (const PreconditionError&) {
    return false;
  }
}

void ChowClass::add(const TautMonomial& m, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

void ChowClass::add(TautMonomial&& m, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(m), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

ChowClass& ChowClass::operator+=(const ChowClass& other) {
  if (other.n_ != n_) throw PreconditionError("classes live on different M_{0,n}");
  for (const auto& [m, coeff] : other.terms_) add(m, coeff);
  return *this;
}

ChowClass& ChowClass::operator-=(const ChowClass& other) {
  if (other.n_ != n_) throw PreconditionError("classes live on different M_{0,n}");
  for (const auto& [m, coeff] : other.terms_) add(m, -coeff);
  return *this;
}

ChowClass& ChowClass::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coeff] : terms_) coeff *= s;
  return *this;
}

StratumTree stratum_tree(int n, std::span<const PointSet> sets) {
  const std::size_t m = sets.size();
  StratumTree t;
  t.parent.assign(m, 0);
  t.valence.assign(m + 1, 0);
  t.point_owner.assign(n, 0);
  for (std::size_t e = 0; e < m; ++e) {
    int best = -1;
    for (std::size_t f = 0; f < m; ++f) {
      if (f == e || (sets[e] & sets[f]) != sets[e]) continue;
      if (best < 0 || popcount(sets[f]) < popcount(sets[best])) best = static_cast<int>(f);
    }
    t.parent[e] = best + 1;
  }
  for (int p = 0; p < n; ++p) {
    int best = -1;
    for (std::size_t e = 0; e < m; ++e) {
      if ((sets[e] >> p) & 1U) {
        if (best < 0 || popcount(sets[e]) < popcount(sets[best])) best = static_cast<int>(e);
      }
    }
    t.point_owner[p] = best + 1;
    ++t.valence[best + 1];
  }
  for (std::size_t e = 0; e < m; ++e) {
    ++t.valence[e + 1];
    ++t.valence[t.parent[e]];
  }
  return t;
}

namespace {

TautMonomial multiply(const TautMonomial& a, const TautMonomial& b) {
  TautMonomial out;
  out.psi.resize(a.psi.size());
  for (std::size_t i = 0; i < a.psi.size(); ++i) out.psi[i] = a.psi[i] + b.psi[i];
  out.deltas.reserve(a.deltas.size() + b.deltas.size());
  auto ia = a.deltas.begin(), ib = b.deltas.begin();
  while (ia != a.deltas.end() || ib != b.deltas.end()) {
    if (ib == b.deltas.end() || (ia != a.deltas.end() && ia->first < ib->first)) {
      out.deltas.push_back(*ia++);
    } else if (ia == a.deltas.end() || ib->first < ia->first) {
      out.deltas.push_back(*ib++);
    } else {
      out.deltas.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return out;
}

bool deltas_compatible(const std::vector<std::pair<PointSet, int>>& deltas) {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    for (std::size_t j = i + 1; j < deltas.size(); ++j) {
      if (!compatible(deltas[i].first, deltas[j].first)) return false;
    }
  }
  return true;
}

long long small_factorial(int k) {
  long long f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

long long small_binomial(int n, int k) {
  long long b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

/// Integral of a monomial, given by psi exponents and a compatible delta list.
/// The stratum is a product of M_{0,valence(v)} over tree vertices; psi_i lives
/// on the vertex holding point i and every extra power of delta_e becomes
/// (-psi' - psi'') at the two legs of edge e.
long long integrate_raw(int n, const std::vector<int>& psi, const std::vector<std::pair<PointSet, int>>& deltas) {
  std::vector<PointSet> sets;
  sets.reserve(deltas.size());
  for (const auto& d : deltas) sets.push_back(d.first);
  const StratumTree tree = stratum_tree(n, sets);
  const std::size_t vertices = tree.valence.size();

  std::vector<int> degree(vertices, 0);
  std::vector<int> target(vertices);
  std::vector<long long> denominator(vertices, 1);
  for (std::size_t v = 0; v < vertices; ++v) target[v] = tree.valence[v] - 3;
  for (int p = 0; p < n; ++p) {
    degree[tree.point_owner[p]] += psi[p];
    denominator[tree.point_owner[p]] *= small_factorial(psi[p]);
  }
  for (std::size_t v = 0; v < vertices; ++v) {
    if (degree[v] > target[v]) return 0;
  }

  struct Excess {
    int child, parent, power;
  };
  std::vector<Excess> excess;
  int sign = 1;
  for (std::size_t e = 0; e < deltas.size(); ++e) {
    const int extra = deltas[e].second - 1;
    if (extra > 0) {
      excess.push_back({static_cast<int>(e) + 1, tree.parent[e], extra});
      if (extra % 2) sign = -sign;
    }
  }

  long long total = 0;
  auto rec = [&](auto&& self, std::size_t idx, long long weight) -> void {
    if (idx == excess.size()) {
      long long value = weight;
      for (std::size_t v = 0; v < vertices; ++v) {
        if (degree[v] != target[v]) return;
        value *= small_factorial(target[v]) / denominator[v];
      }
      total += value;
      return;
    }
    const Excess& x = excess[idx];
    for (int a = 0; a <= x.power; ++a) {
      const int b = x.power - a;
      if (degree[x.child] + a > target[x.child] || degree[x.parent] + b > target[x.parent]) continue;
      degree[x.child] += a;
      degree[x.parent] += b;
      denominator[x.child] *= small_factorial(a);
      denominator[x.parent] *= small_factorial(b);
      self(self, idx + 1, weight * small_binomial(x.power, a));
      denominator[x.child] /= small_factorial(a);
      denominator[x.parent] /= small_factorial(b);
      degree[x.child] -= a;
      degree[x.parent] -= b;
    }
  };
  rec(rec, 0, 1);
  return sign * total;
}

}  // namespace

ChowClass product(const ChowClass& a, const ChowClass& b) {
  if (a.n() != b.n()) throw PreconditionError("product of classes on different M_{0,n}");
  ChowClass out(a.n());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) out.add(multiply(ma, mb), ca * cb);
  }
  return out;
}

ChowClass power(const ChowClass& a, int k) {
  if (k < 0) throw PreconditionError("negative power");
  ChowClass out = ChowClass::fundamental(a.n());
  for (int i = 0; i < k; ++i) out = drop_vanishing(product(out, a));
  return out;
}

ChowClass drop_vanishing(ChowClass c) {
  ChowClass out(c.n());
  for (const auto& [m, coeff] : c.terms()) {
    if (deltas_compatible(m.deltas)) out.add(m, coeff);
  }
  return out;
}

Rational integrate_monomial(int n, const TautMonomial& m) {
  if (m.degree() != n - 3) {
    throw PreconditionError("integrand has degree " + std::to_string(m.degree()) + ", expected " +
                            std::to_string(n - 3));
  }
  if (!deltas_compatible(m.deltas)) return 0;
  return Rational(static_cast<long>(integrate_raw(n, m.psi, m.deltas)));
}

Rational integrate(const ChowClass& c) {
  Rational total = 0;
  for (const auto& [m, coeff] : c.terms()) {
    const Rational value = integrate_monomial(c.n(), m);
    if (value != 0) total += coeff * value;
  }
  return total;
}

Rational psi_multinomial(std::span<const int> exponents) {
  const int n = static_cast<int>(exponents.size());
  const int total = std::accumulate(exponents.begin(), exponents.end(), 0);
  if (total != n - 3) return 0;
  Rational out = factorial(n - 3);
  for (int k : exponents) out /= factorial(k);
  return out;
}

Rational pair_with_stratum(const ChowClass& c, std::span<const PointSet> family) {
  const int n = c.n();
  TautMonomial stratum{std::vector<int>(n, 0), {}};
  for (PointSet d : family) stratum.deltas.emplace_back(canonical_boundary(n, d), 1);
  std::sort(stratum.deltas.begin(), stratum.deltas.end());
  for (std::size_t i = 1; i < stratum.deltas.size(); ++i) {
    if (stratum.deltas[i].first == stratum.deltas[i - 1].first) {
      throw PreconditionError("stratum family repeats a divisor");
    }
  }
  if (!deltas_compatible(stratum.deltas)) return 0;
  Rational total = 0;
  for (const auto& [m, coeff] : c.terms()) {
    if (m.degree() + static_cast<int>(family.size()) != n - 3) {
      throw PreconditionError("pairing is not of top degree");
    }
    // Cheap rejection before the product is formed.
    bool meets = true;
    for (const auto& [set, power] : m.deltas) {
      for (PointSet d : family) {
        if (!compatible(set, d)) {
          meets = false;
          break;
        }
      }
      if (!meets) break;
    }
    if (!meets) continue;
    const TautMonomial full = multiply(m, stratum);
    if (!deltas_compatible(full.deltas)) continue;
    const long long value = integrate_raw(n, full.psi, full.deltas);
    if (value != 0) total += coeff * Rational(static_cast<long>(value));
  }
  return total;
}

void NestedChain::validate() const {
  if (n < 4 || n > kMaxPoints) throw PreconditionError("chains need 4 <= n <= 20");
  PointSet seen = 0;
  for (PointSet part : parts) {
    if (part == 0) throw PreconditionError("empty part");
    if ((part & ~all_points(n)) != 0) throw PreconditionError("part mentions a point beyond n");
    if ((part & seen) != 0) throw PreconditionError("parts are not disjoint");
    seen |= part;
  }
  if (kind == Kind::fcycle) {
    if (seen != all_points(n)) throw PreconditionError("F-cycle parts do not cover {1..n}");
    if (parts.size() < 3) throw PreconditionError("an F-cycle needs at least 3 parts");
    for (PointSet part : parts) {
      if (popcount(part) >= n - 1) throw PreconditionError("F-cycle part of size n-1 or n");
    }
    return;
  }
  if (parts.empty()) throw PreconditionError("empty chain");
  if ((seen & 1U) != 0) throw PreconditionError("point 1 must lie outside J_m");
  if (popcount(parts.front()) < 2) throw PreconditionError("|J_1| must be at least 2");
  if (n - popcount(seen) < 2) throw PreconditionError("|J_m^c| must be at least 2");
}

std::vector<PointSet> NestedChain::cumulative() const {
  std::vector<PointSet> out;
  PointSet acc = 0;
  for (PointSet part : parts) {
    acc |= part;
    out.push_back(acc);
  }
  return out;
}

std::vector<PointSet> stratum_family(const NestedChain& chain) {
  chain.validate();
  std::vector<PointSet> family;
  if (chain.kind == NestedChain::Kind::chain) {
    for (PointSet j : chain.cumulative()) family.push_back(canonical_boundary(chain.n, j));
  } else {
    // Each tail (P^1, J u {q}) is held at a fixed point of M_{0,|J|+1}: the
    // boundary point given by the caterpillar {a1,a2} < {a1,a2,a3} < ... < J.
    for (PointSet part : chain.parts) {
      const std::vector<int> pts = members(part);
      if (pts.size() < 2) continue;
      PointSet acc = point_bit(pts[0]);
      for (std::size_t i = 1; i < pts.size(); ++i) {
        acc |= point_bit(pts[i]);
        family.push_back(canonical_boundary(chain.n, acc));
      }
    }
  }
  std::sort(family.begin(), family.end());
  return family;
}

ChowClass stratum_class(const NestedChain& chain) {
  ChowClass c = ChowClass::fundamental(chain.n);
  for (PointSet d : stratum_family(chain)) c = product(c, ChowClass::delta(chain.n, d));
  return c;
}

std::vector<Rational> pairing_vector(const ChowClass& c, std::optional<int> degree) {
  const auto own = c.degree();
  if (own && degree && *own != *degree) throw PreconditionError("class does not have the requested degree");
  const auto deg = own ? own : degree;
  const int n = c.n();
  const int codim = n - 3 - deg.value_or(0);
  if (codim < 0) throw PreconditionError("class degree exceeds dim M_{0,n}");
  const auto families = compatible_families(n, codim);
  std::vector<Rational> out(families.size());
  if (c.empty()) return out;

  // Boundary divisors indexed so that "every factor of the term meets every
  // divisor of the stratum" becomes a bitset inclusion test.
  const std::vector<PointSet> divisors = boundary_divisors(n);
  const std::size_t words = (divisors.size() + 63) / 64;
  auto index_of = [&](PointSet d) {
    return static_cast<std::size_t>(std::lower_bound(divisors.begin(), divisors.end(), d,
                                                     [](PointSet a, PointSet b) {
                                                       const int pa = popcount(a), pb = popcount(b);
                                                       return pa != pb ? pa < pb : a < b;
                                                     }) -
                                    divisors.begin());
  };
  const bool indexed = divisors.size() <= 4096;
  std::vector<std::vector<std::uint64_t>> meets;
  std::vector<std::vector<std::uint64_t>> term_masks;
  std::vector<const std::pair<const TautMonomial, Rational>*> term_refs;
  if (indexed) {
    meets.assign(divisors.size(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t i = 0; i < divisors.size(); ++i) {
      for (std::size_t j = 0; j < divisors.size(); ++j) {
        if (compatible(divisors[i], divisors[j])) meets[i][j / 64] |= std::uint64_t{1} << (j % 64);
      }
    }
    for (const auto& term : c.terms()) {
      if (term.first.degree() != *deg) throw PreconditionError("pairing is not of top degree");
      if (!deltas_compatible(term.first.deltas)) continue;
      std::vector<std::uint64_t> mask(words, 0);
      for (const auto& [set, power] : term.first.deltas) {
        const std::size_t j = index_of(set);
        mask[j / 64] |= std::uint64_t{1} << (j % 64);
      }
      term_masks.push_back(std::move(mask));
      term_refs.push_back(&term);
    }
  }

  auto pair_one = [&](const std::vector<PointSet>& family) -> Rational {
    if (!indexed) return pair_with_stratum(c, family);
    std::vector<std::uint64_t> allowed(words, ~std::uint64_t{0});
    TautMonomial stratum{std::vector<int>(n, 0), {}};
    for (PointSet d : family) {
      const auto& row = meets[index_of(d)];
      for (std::size_t w = 0; w < words; ++w) allowed[w] &= row[w];
      stratum.deltas.emplace_back(d, 1);
    }
    std::sort(stratum.deltas.begin(), stratum.deltas.end());
    Rational total = 0;
    for (std::size_t t = 0; t < term_refs.size(); ++t) {
      bool ok = true;
      for (std::size_t w = 0; w < words && ok; ++w) ok = (term_masks[t][w] & ~allowed[w]) == 0;
      if (!ok) continue;
      const TautMonomial full = multiply(term_refs[t]->first, stratum);
      const long long value = integrate_raw(n, full.psi, full.deltas);
      if (value != 0) total += term_refs[t]->second * Rational(static_cast<long>(value));
    }
    return total;
  };

  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  if (workers == 1) {
    for (std::size_t i = 0; i < families.size(); ++i) out[i] = pair_one(families[i]);
    return out;
  }
  const std::size_t chunk = (families.size() + workers - 1) / workers;
  std::vector<std::future<void>> jobs;
  for (std::size_t begin = 0; begin < families.size(); begin += chunk) {
    const std::size_t end = std::min(families.size(), begin + chunk);
    jobs.push_back(std::async(std::launch::async, [&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) out[i] = pair_one(families[i]);
    }));
  }
  for (auto& job : jobs) job.get();
  return out;
}

bool numerically_zero(const ChowClass& c) {
  const auto v = pairing_vector(c);
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

bool classes_equal(const ChowClass& a, const ChowClass& b) {
  if (a.n() != b.n()) throw PreconditionError("classes live on different M_{0,n}");
  const auto da = a.degree(), db = b.degree();
  if (da && db && *da != *db) throw PreconditionError("classes have different degrees");
  return numerically_zero(a - b);
}

ChowClass permute(const ChowClass& c, std::span<const int> perm) {
  const int n = c.n();
  if (static_cast<int>(perm.size()) != n) throw PreconditionError("permutation has the wrong length");
  auto image = [&](PointSet s) {
    PointSet out = 0;
    for (int p : members(s)) out |= point_bit(perm[p - 1]);
    return canonical_boundary(n, out);
  };
  ChowClass out(n);
  for (const auto& [m, coeff] : c.terms()) {
    TautMonomial moved{std::vector<int>(n, 0), {}};
    for (int i = 0; i < n; ++i) moved.psi[perm[i] - 1] = m.psi[i];
    for (const auto& [set, power] : m.deltas) moved.deltas.emplace_back(image(set), power);
    std::sort(moved.deltas.begin(), moved.deltas.end());
    out.add(std::move(moved), coeff);
  }
  return out;
}

}  // namespace cbchern
