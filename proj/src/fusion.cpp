#include "cbchern/fusion.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <sstream>
#include <tuple>

#include "cbchern/errors.hpp"

namespace cbchern {

void BundleSpec::validate() const {
  if (alg.r < 1) throw PreconditionError("algebra rank must be positive");
  if (level < 1) throw PreconditionError("level must be positive");
  if (weights.size() < 3) throw PreconditionError("need at least 3 marked points");
  for (const Weight& w : weights) {
    if (w.r() != alg.r) throw PreconditionError("weight " + w.str() + " does not belong to " + alg.name());
    if (!at_level(alg, level, w)) {
      throw PreconditionError("weight " + w.str() + " is above level " + std::to_string(level));
    }
  }
}

namespace {

using Partition = std::vector<int>;

int size_of(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

/// Number of Littlewood-Richardson tableaux of shape nu/lambda and content mu.
/// All three are padded to the same length by the caller.
std::uint64_t count_lr_tableaux(const Partition& lambda, const Partition& mu, const Partition& nu) {
  const int rows = static_cast<int>(nu.size());
  for (int i = 0; i < rows; ++i) {
    if (lambda[i] > nu[i]) return 0;
  }
  if (size_of(lambda) + size_of(mu) != size_of(nu)) return 0;

  const int labels = static_cast<int>(mu.size());
  std::vector<std::vector<int>> fill(rows);
  for (int i = 0; i < rows; ++i) fill[i].assign(nu[i], 0);
  std::vector<int> count(labels + 1, 0);

  // Cells in reading order: top row first, each row right to left.
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < rows; ++i) {
    for (int c = nu[i] - 1; c >= lambda[i]; --c) cells.emplace_back(i, c);
  }

  std::uint64_t total = 0;
  auto dfs = [&](auto&& self, std::size_t idx) -> void {
    if (idx == cells.size()) {
      ++total;
      return;
    }
    const auto [i, c] = cells[idx];
    int hi = labels;
    if (c + 1 < nu[i]) hi = std::min(hi, fill[i][c + 1]);  // rows weakly increase
    int lo = 1;
    if (i > 0 && c >= lambda[i - 1]) lo = fill[i - 1][c] + 1;  // columns strictly increase
    lo = std::max(lo, 1);
    hi = std::min(hi, i + 1);
    for (int t = lo; t <= hi; ++t) {
      if (count[t] >= mu[t - 1]) continue;
      if (t > 1 && count[t] + 1 > count[t - 1]) continue;  // lattice word
      ++count[t];
      fill[i][c] = t;
      self(self, idx + 1);
      fill[i][c] = 0;
      --count[t];
    }
  };
  dfs(dfs, 0);
  return total;
}

Partition padded(const std::vector<int>& p, std::size_t len) {
  Partition out(len, 0);
  std::copy_n(p.begin(), std::min(p.size(), len), out.begin());
  return out;
}

struct FoldResult {
  int sign = 0;  // 0 when the weight lies on an alcove wall
  Weight weight;
};

/// Folds a dominant-or-not sl(r+1) weight, given by r+1 row lengths, into the
/// level-`level` alcove under the shifted affine Weyl action.
FoldResult kac_walton_fold(int r, int level, const Partition& rows) {
  const int k = level + r + 1;
  std::vector<long> x(r + 1);
  for (int i = 0; i <= r; ++i) x[i] = rows[i] + (r - i);
  int sign = 1;
  while (true) {
    // Insertion sort into decreasing order, tracking the permutation parity.
    for (int i = 1; i <= r; ++i) {
      for (int j = i; j > 0 && x[j] > x[j - 1]; --j) {
        std::swap(x[j], x[j - 1]);
        sign = -sign;
      }
    }
    for (int i = 0; i < r; ++i) {
      if (x[i] == x[i + 1]) return {};
    }
    const long spread = x[0] - x[r];
    if (spread < k) break;
    if (spread == k) return {};
    const long d = spread - k;
    x[0] -= d;
    x[r] += d;
    sign = -sign;
  }
  std::vector<int> labels(r);
  for (int i = 0; i < r; ++i) labels[i] = static_cast<int>(x[i] - x[i + 1] - 1);
  return {sign, Weight(std::move(labels))};
}

using ProductKey = std::tuple<int, int, Weight, Weight>;
using TripleKey = std::tuple<int, int, Weight, Weight, Weight>;
using RankKey = std::tuple<int, int, std::vector<Weight>>;

struct Tables {
  std::shared_mutex mutex;
  std::map<ProductKey, std::map<Weight, std::uint64_t>> products;
  std::map<TripleKey, std::uint64_t> triples;
  std::map<RankKey, std::uint64_t> ranks;
};

Tables& tables() {
  static Tables t;
  return t;
}

TripleKey triple_key(AlgebraSpec alg, int level, Weight a, Weight b, Weight c) {
  std::array<Weight, 3> w{std::move(a), std::move(b), std::move(c)};
  std::sort(w.begin(), w.end());
  return {alg.r, level, std::move(w[0]), std::move(w[1]), std::move(w[2])};
}

std::map<Weight, std::uint64_t> compute_fusion_product(AlgebraSpec alg, int level, const Weight& lambda,
                                                       const Weight& mu) {
  std::map<Weight, long long> signed_mult;
  for (const auto& [kappa, mult] : tensor_product(alg, lambda, mu)) {
    const FoldResult folded = kac_walton_fold(alg.r, level, padded(kappa.partition(), alg.r + 1));
    if (folded.sign == 0) continue;
    signed_mult[folded.weight] += folded.sign * static_cast<long long>(mult);
  }
  std::map<Weight, std::uint64_t> out;
  for (const auto& [nu, m] : signed_mult) {
    if (m < 0) throw std::logic_error("negative fusion multiplicity for " + nu.str());
    if (m > 0) out.emplace(nu, static_cast<std::uint64_t>(m));
  }
  return out;
}

std::uint64_t caterpillar_rank(AlgebraSpec alg, int level, std::span<const Weight> weights) {
  const std::size_t n = weights.size();
  if (n == 0) return 1;
  if (n == 1) return weights[0].is_zero() ? 1 : 0;
  std::map<Weight, std::uint64_t> dist{{weights[0], 1}};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    std::map<Weight, std::uint64_t> next;
    for (const auto& [alpha, count] : dist) {
      for (const auto& [kappa, m] : fusion_product(alg, level, alpha, weights[i])) next[kappa] += count * m;
    }
    dist = std::move(next);
    if (dist.empty()) return 0;
  }
  auto it = dist.find(dual_weight(weights[n - 1]));
  return it == dist.end() ? 0 : it->second;
}

}  // namespace

std::uint64_t lr_coefficient(AlgebraSpec alg, const Weight& lambda, const Weight& mu, const Weight& nu) {
  for (const Weight* w : {&lambda, &mu, &nu}) {
    if (w->r() != alg.r) throw PreconditionError("weight rank does not match algebra");
  }
  const int excess = lambda.boxes() + mu.boxes() - nu.boxes();
  if (excess < 0 || excess % (alg.r + 1) != 0) return 0;
  const int full_columns = excess / (alg.r + 1);
  Partition target = padded(nu.partition(), alg.r + 1);
  for (int& row : target) row += full_columns;
  return count_lr_tableaux(padded(lambda.partition(), alg.r + 1), padded(mu.partition(), alg.r + 1), target);
}

std::map<Weight, std::uint64_t> tensor_product(AlgebraSpec alg, const Weight& lambda, const Weight& mu) {
  if (lambda.r() != alg.r || mu.r() != alg.r) throw PreconditionError("weight rank does not match algebra");
  const int len = alg.r + 1;
  const Partition lam = padded(lambda.partition(), len);
  const Partition m = padded(mu.partition(), len);
  const int total = size_of(lam) + size_of(m);

  std::map<Weight, std::uint64_t> out;
  Partition nu(len, 0);
  // Candidate shapes: lam <= nu <= lam + mu_1 per row, |nu| = total.
  auto rec = [&](auto&& self, int row, int remaining) -> void {
    if (row == len) {
      if (remaining != 0) return;
      if (const std::uint64_t c = count_lr_tableaux(lam, m, nu); c > 0) {
        out[Weight::from_partition(alg.r, nu)] += c;
      }
      return;
    }
    const int hi = std::min({row == 0 ? lam[0] + m[0] : nu[row - 1], lam[row] + m[0], lam[row] + remaining});
    for (int v = hi; v >= std::max(lam[row], m[row]); --v) {
      nu[row] = v;
      self(self, row + 1, remaining - (v - lam[row]));
    }
    nu[row] = 0;
  };
  rec(rec, 0, size_of(m));
  return out;
}

std::map<Weight, std::uint64_t> fusion_product(AlgebraSpec alg, int level, const Weight& lambda,
                                               const Weight& mu) {
  if (!at_level(alg, level, lambda) || !at_level(alg, level, mu)) {
    throw PreconditionError("fusion arguments must be at level " + std::to_string(level));
  }
  ProductKey key{alg.r, level, std::min(lambda, mu), std::max(lambda, mu)};
  Tables& t = tables();
  {
    std::shared_lock lock(t.mutex);
    if (auto it = t.products.find(key); it != t.products.end()) return it->second;
  }
  // A complete set of loaded three-point records determines the product.
  std::map<Weight, std::uint64_t> product;
  bool complete = true;
  {
    std::shared_lock lock(t.mutex);
    for (const Weight& nu : enumerate_weights(alg, level)) {
      const auto it = t.triples.find(triple_key(alg, level, lambda, mu, nu));
      if (it == t.triples.end()) {
        complete = false;
        break;
      }
      if (it->second > 0) product.emplace(dual_weight(nu), it->second);
    }
  }
  if (!complete) product = compute_fusion_product(alg, level, lambda, mu);
  std::unique_lock lock(t.mutex);
  return t.products.emplace(std::move(key), std::move(product)).first->second;
}

std::uint64_t fusion_coefficient(AlgebraSpec alg, int level, const Weight& lambda, const Weight& mu,
                                 const Weight& nu) {
  for (const Weight* w : {&lambda, &mu, &nu}) {
    if (!at_level(alg, level, *w)) {
      throw PreconditionError("weight " + w->str() + " is not at level " + std::to_string(level));
    }
  }
  TripleKey key = triple_key(alg, level, lambda, mu, nu);
  Tables& t = tables();
  {
    std::shared_lock lock(t.mutex);
    if (auto it = t.triples.find(key); it != t.triples.end()) return it->second;
  }
  const auto product = fusion_product(alg, level, lambda, mu);
  const auto it = product.find(dual_weight(nu));
  const std::uint64_t value = it == product.end() ? 0 : it->second;
  std::unique_lock lock(t.mutex);
  t.triples.emplace(std::move(key), value);
  return value;
}

std::uint64_t rank_of(AlgebraSpec alg, int level, std::span<const Weight> weights) {
  std::vector<Weight> sorted(weights.begin(), weights.end());
  for (const Weight& w : sorted) {
    if (!at_level(alg, level, w)) {
      throw PreconditionError("weight " + w.str() + " is not at level " + std::to_string(level));
    }
  }
  std::sort(sorted.begin(), sorted.end());
  // The vacuum propagates: zero weights never change the rank once n >= 1.
  std::erase_if(sorted, [](const Weight& w) { return w.is_zero(); });
  RankKey key{alg.r, level, sorted};
  Tables& t = tables();
  {
    std::shared_lock lock(t.mutex);
    if (auto it = t.ranks.find(key); it != t.ranks.end()) return it->second;
  }
  const std::uint64_t value = caterpillar_rank(alg, level, sorted);
  std::unique_lock lock(t.mutex);
  t.ranks.emplace(std::move(key), value);
  return value;
}

std::uint64_t rank(const BundleSpec& spec) {
  spec.validate();
  return caterpillar_rank(spec.alg, spec.level, spec.weights);
}

std::uint64_t rank_factorized(const BundleSpec& spec, std::span<const int> side) {
  spec.validate();
  std::vector<bool> in_side(spec.weights.size(), false);
  std::vector<Weight> left, right;
  for (int i : side) {
    if (i < 0 || i >= spec.points() || in_side[i]) throw PreconditionError("bad factorization side");
    in_side[i] = true;
  }
  for (int i = 0; i < spec.points(); ++i) (in_side[i] ? left : right).push_back(spec.weights[i]);
  std::uint64_t total = 0;
  for (const Weight& mu : enumerate_weights(spec.alg, spec.level)) {
    left.push_back(mu);
    right.push_back(dual_weight(mu));
    total += caterpillar_rank(spec.alg, spec.level, left) * caterpillar_rank(spec.alg, spec.level, right);
    left.pop_back();
    right.pop_back();
  }
  return total;
}

std::uint64_t sl2_rank_oracle(const BundleSpec& spec) {
  if (spec.alg.r != 1) throw PreconditionError("sl2_rank_oracle needs r = 1");
  spec.validate();
  const int level = spec.level;
  std::vector<std::uint64_t> dist(level + 1, 0);
  dist[spec.weights[0][0]] = 1;
  for (int i = 1; i + 1 < spec.points(); ++i) {
    const int b = spec.weights[i][0];
    std::vector<std::uint64_t> next(level + 1, 0);
    for (int a = 0; a <= level; ++a) {
      if (dist[a] == 0) continue;
      for (int c = std::abs(a - b); c <= std::min(a + b, 2 * level - a - b); c += 2) next[c] += dist[a];
    }
    dist = std::move(next);
  }
  return dist[spec.weights.back()[0]];
}

namespace fusion_cache {

std::size_t size() {
  std::shared_lock lock(tables().mutex);
  return tables().triples.size();
}

void clear() {
  Tables& t = tables();
  std::unique_lock lock(t.mutex);
  t.products.clear();
  t.triples.clear();
  t.ranks.clear();
}

namespace {

bool parse_record(const std::string& line, TripleKey& key, std::uint64_t& value) {
  std::string text = line;
  // Accept the UTF-8 arrow or its ASCII spelling.
  if (auto pos = text.find("\xE2\x86\x92"); pos != std::string::npos) {
    text.replace(pos, 3, " -> ");
  }
  std::istringstream in(text);
  int r = 0, level = 0;
  std::string a, b, c, arrow;
  long long n = -1;
  if (!(in >> r >> level >> a >> b >> c >> arrow >> n) || arrow != "->" || n < 0) return false;
  std::string rest;
  if (in >> rest) return false;
  if (r < 1 || level < 1) return false;
  try {
    const AlgebraSpec alg{r};
    Weight wa = parse_weight(alg, a), wb = parse_weight(alg, b), wc = parse_weight(alg, c);
    for (const Weight* w : {&wa, &wb, &wc}) {
      if (!at_level(alg, level, *w)) return false;
    }
    // Three-point ranks vanish unless the boxes balance modulo r+1.
    if ((wa.boxes() + wb.boxes() + wc.boxes()) % (r + 1) != 0 && n != 0) return false;
    key = triple_key(alg, level, std::move(wa), std::move(wb), std::move(wc));
  } catch (const std::exception&) {
    return false;
  }
  value = static_cast<std::uint64_t>(n);
  return true;
}

}  // namespace

std::size_t load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) return 0;
  std::vector<std::pair<TripleKey, std::uint64_t>> records;
  std::map<ProductKey, std::map<Weight, std::uint64_t>> checked;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    TripleKey key;
    std::uint64_t value = 0;
    if (!parse_record(line, key, value)) {
      std::cerr << "fusion cache: skipping malformed record: " << line << '\n';
      continue;
    }
    // A stale or tampered value must not leak into ranks.
    const auto& [r, level, a, b, c] = key;
    ProductKey pk{r, level, a, b};
    auto found = checked.find(pk);
    if (found == checked.end()) {
      found = checked.emplace(pk, compute_fusion_product(AlgebraSpec{r}, level, a, b)).first;
    }
    const auto& product = found->second;
    const auto it = product.find(dual_weight(c));
    if ((it == product.end() ? 0 : it->second) != value) {
      std::cerr << "fusion cache: skipping wrong record: " << line << '\n';
      continue;
    }
    records.emplace_back(std::move(key), value);
  }
  Tables& t = tables();
  std::unique_lock lock(t.mutex);
  for (auto& [key, value] : records) t.triples.insert_or_assign(std::move(key), value);
  return records.size();
}

void save(const std::filesystem::path& file) {
  Tables& t = tables();
  std::map<TripleKey, std::uint64_t> records;
  {
    std::shared_lock lock(t.mutex);
    records = t.triples;
    for (const auto& [key, product] : t.products) {
      const auto& [r, level, a, b] = key;
      for (const Weight& nu : enumerate_weights(AlgebraSpec{r}, level)) {
        const auto it = product.find(dual_weight(nu));
        records.emplace(triple_key(AlgebraSpec{r}, level, a, b, nu), it == product.end() ? 0 : it->second);
      }
    }
  }
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write fusion cache " + file.string());
  for (const auto& [key, value] : records) {
    const auto& [r, level, a, b, c] = key;
    out << r << ' ' << level << ' ' << a.str() << ' ' << b.str() << ' ' << c.str() << " \xE2\x86\x92 " << value
        << '\n';
  }
}

}  // namespace fusion_cache

}  // namespace cbchern
