#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include "cbchern/errors.hpp"
#include "cbchern/fusion.hpp"

using namespace cbchern;

namespace {

Weight W(std::vector<int> labels) { return Weight(std::move(labels)); }

// Schur polynomials in N variables by enumerating semistandard tableaux,
// a route independent of the LR tableau search.
using Poly = std::map<std::vector<int>, long long>;

Poly schur_poly(const std::vector<int>& shape, int vars) {
  Poly out;
  std::vector<std::vector<int>> t;
  for (int row : shape) t.emplace_back(row, 0);
  std::vector<std::pair<int, int>> cells;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    for (int j = 0; j < shape[i]; ++j) cells.emplace_back(static_cast<int>(i), j);
  }
  auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (idx == cells.size()) {
      std::vector<int> exps(vars, 0);
      for (const auto& row : t) {
        for (int v : row) ++exps[v - 1];
      }
      ++out[exps];
      return;
    }
    const auto [i, j] = cells[idx];
    int lo = 1;
    if (j > 0) lo = std::max(lo, t[i][j - 1]);
    if (i > 0) lo = std::max(lo, t[i - 1][j] + 1);
    for (int v = lo; v <= vars; ++v) {
      t[i][j] = v;
      self(self, idx + 1);
    }
    t[i][j] = 0;
  };
  rec(rec, 0);
  return out;
}

std::vector<int> trimmed(std::vector<int> p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

// Decomposes s_lambda * s_mu in N = r+1 variables and reads off the
// multiplicity of nu after deleting full columns.
std::uint64_t lr_oracle(int r, const Weight& lambda, const Weight& mu, const Weight& nu) {
  const int vars = r + 1;
  Poly prod;
  const Poly a = schur_poly(trimmed(lambda.partition()), vars);
  const Poly b = schur_poly(trimmed(mu.partition()), vars);
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(vars);
      for (int i = 0; i < vars; ++i) e[i] = ea[i] + eb[i];
      prod[e] += ca * cb;
    }
  }
  std::uint64_t found = 0;
  while (true) {
    std::erase_if(prod, [](const auto& kv) { return kv.second == 0; });
    if (prod.empty()) break;
    const auto lead = prod.rbegin()->first;
    const long long c = prod.rbegin()->second;
    REQUIRE(c > 0);
    if (Weight::from_partition(r, lead) == nu) found += static_cast<std::uint64_t>(c);
    for (const auto& [e, v] : schur_poly(trimmed(lead), vars)) prod[e] -= c * v;
  }
  return found;
}

std::uint64_t sl2_fusion_rule(int l, int a, int b, int c) {
  if ((a + b + c) % 2) return 0;
  return c >= std::abs(a - b) && c <= std::min(a + b, 2 * l - a - b) ? 1 : 0;
}

}  // namespace

TEST_CASE("Littlewood-Richardson fixtures") {
  CHECK(lr_coefficient({2}, W({1, 0}), W({1, 0}), W({0, 1})) == 1);
  CHECK(lr_coefficient({2}, W({1, 1}), W({1, 1}), W({1, 1})) == 2);
  CHECK(lr_coefficient({2}, W({1, 0}), W({1, 0}), W({1, 0})) == 0);
  CHECK(lr_coefficient({1}, W({3}), W({2}), W({1})) == 1);
}

TEST_CASE("LR coefficients agree with Schur polynomial products") {
  for (int r = 1; r <= 3; ++r) {
    const auto ws = enumerate_weights({r}, r == 3 ? 2 : 3);
    for (const Weight& a : ws) {
      for (const Weight& b : ws) {
        for (const Weight& c : enumerate_weights({r}, 6)) {
          if ((a.boxes() + b.boxes() - c.boxes()) % (r + 1) != 0) continue;
          CHECK(lr_coefficient({r}, a, b, c) == lr_oracle(r, a, b, c));
        }
      }
    }
  }
}

TEST_CASE("sl2 fusion matches the interval rule") {
  for (int l = 1; l <= 5; ++l) {
    for (int a = 0; a <= l; ++a) {
      for (int b = 0; b <= l; ++b) {
        for (int c = 0; c <= l; ++c) {
          CHECK(fusion_coefficient({1}, l, W({a}), W({b}), W({c})) == sl2_fusion_rule(l, a, b, c));
        }
      }
    }
  }
  CHECK(fusion_coefficient({1}, 2, W({1}), W({1}), W({0})) == 1);
  CHECK(fusion_coefficient({1}, 2, W({1}), W({1}), W({2})) == 1);
  CHECK(fusion_coefficient({1}, 2, W({2}), W({2}), W({2})) == 0);
}

TEST_CASE("level-one fusion is the cyclic group") {
  for (int r = 1; r <= 6; ++r) {
    for (int i = 0; i <= r; ++i) {
      for (int j = 0; j <= r; ++j) {
        const Weight a = i == 0 ? Weight::zero(r) : Weight::fundamental(r, i);
        const Weight b = j == 0 ? Weight::zero(r) : Weight::fundamental(r, j);
        const int k = (i + j) % (r + 1);
        const Weight c = k == 0 ? Weight::zero(r) : Weight::fundamental(r, k);
        const auto prod = fusion_product({r}, 1, a, b);
        REQUIRE(prod.size() == 1);
        CHECK(prod.begin()->first == c);
        CHECK(prod.begin()->second == 1);
      }
    }
  }
}

TEST_CASE("vacuum insertion, symmetry, monotonicity and stabilization") {
  for (int r = 1; r <= 3; ++r) {
    for (int l = 1; l <= 3; ++l) {
      const auto ws = enumerate_weights({r}, l);
      for (const Weight& a : ws) {
        for (const Weight& c : ws) {
          CHECK(fusion_coefficient({r}, l, a, Weight::zero(r), c) == (c == dual_weight(a) ? 1u : 0u));
        }
        for (const Weight& b : ws) {
          for (const Weight& c : ws) {
            const auto n = fusion_coefficient({r}, l, a, b, c);
            CHECK(n == fusion_coefficient({r}, l, b, c, a));
            CHECK(n == fusion_coefficient({r}, l, dual_weight(a), dual_weight(b), dual_weight(c)));
            CHECK(n <= fusion_coefficient({r}, l + 1, a, b, c));
            const int stable = theta_pairing(a) + theta_pairing(b);
            CHECK(fusion_coefficient({r}, std::max(l, stable), a, b, c) ==
                  lr_coefficient({r}, a, b, dual_weight(c)));
          }
        }
      }
    }
  }
}

TEST_CASE("rank fixtures") {
  auto spec = [](int r, int l, std::vector<std::vector<int>> ws) {
    BundleSpec s{{r}, l, {}};
    for (auto& w : ws) s.weights.emplace_back(std::move(w));
    return s;
  };
  CHECK(rank(spec(1, 2, {{1}, {1}, {1}, {1}, {2}})) == 2);
  CHECK(rank(spec(2, 2, {{2, 0}, {2, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}})) == 3);
  CHECK(rank(spec(2, 1, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 0}})) == 1);
  CHECK(rank(spec(2, 3, {{3, 0}, {3, 0}, {2, 0}, {2, 0}, {2, 0}, {2, 0}, {1, 0}})) == 3);
  CHECK(rank(spec(1, 1, {{1}, {1}, {1}})) == 0);
  CHECK(rank(spec(1, 3, std::vector<std::vector<int>>(8, {1}))) == 13);
  CHECK(rank(spec(1, 2, std::vector<std::vector<int>>(8, {1}))) == 8);
  // sl2 at level 2 with 2m copies of omega_1 has rank 2^(m-1).
  CHECK(rank(spec(1, 2, std::vector<std::vector<int>>(6, {1}))) == 4);
  CHECK(rank(spec(1, 2, {{1}, {1}, {1}, {1}, {1}, {1}, {0}})) == 4);
  // Level one, fundamental weights: rank 1 when r+1 divides the boxes.
  CHECK(rank(spec(5, 1, std::vector<std::vector<int>>(6, {0, 1, 0, 0, 0}))) == 1);
  CHECK(rank(spec(5, 1, std::vector<std::vector<int>>(6, {0, 0, 1, 0, 0}))) == 1);
}

TEST_CASE("propagation of vacua and factorization") {
  BundleSpec s{{2}, 2, {W({2, 0}), W({2, 0}), W({1, 0}), W({1, 0}), W({1, 0}), W({1, 0}), W({1, 0})}};
  const auto base = rank(s);
  BundleSpec more = s;
  more.weights.push_back(Weight::zero(2));
  CHECK(rank(more) == base);
  for (int mask = 1; mask < (1 << 7) - 1; ++mask) {
    std::vector<int> side;
    for (int i = 0; i < 7; ++i) {
      if (mask & (1 << i)) side.push_back(i);
    }
    CHECK(rank_factorized(s, side) == base);
  }
}

TEST_CASE("sl2 oracle") {
  BundleSpec s{{1}, 2, std::vector<Weight>(6, W({1}))};
  CHECK(sl2_rank_oracle(s) == 4);
  s.weights.push_back(W({0}));
  CHECK(sl2_rank_oracle(s) == 4);
  CHECK(sl2_rank_oracle(BundleSpec{{1}, 2, std::vector<Weight>(8, W({1}))}) == 8);
  CHECK_THROWS_AS(sl2_rank_oracle(BundleSpec{{2}, 1, std::vector<Weight>(3, W({1, 0}))}), PreconditionError);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(BundleSpec({{1}, 1, {W({2}), W({0}), W({2})}}).validate(), PreconditionError);
  CHECK_THROWS_AS(BundleSpec({{1}, 1, {W({1}), W({1})}}).validate(), PreconditionError);
  CHECK_NOTHROW(BundleSpec({{1}, 1, {W({1}), W({1}), W({0})}}).validate());
}

TEST_CASE("fusion cache persists and validates records") {
  const auto dir = std::filesystem::temp_directory_path() / "cbchern_cache_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "fusion.cache";
  fusion_cache::clear();
  const auto expected = fusion_coefficient({2}, 2, W({1, 1}), W({1, 1}), W({1, 1}));
  fusion_cache::save(file);
  fusion_cache::clear();
  CHECK(fusion_cache::size() == 0);
  CHECK(fusion_cache::load(file) >= 1);
  CHECK(fusion_coefficient({2}, 2, W({1, 1}), W({1, 1}), W({1, 1})) == expected);

  {
    std::ofstream out(file);
    out << "2 2 1,1 1,1 1,1 \xE2\x86\x92 " << expected << "\n";  // valid
    out << "1 2 1 1 2 -> 1\n";                                  // valid, ASCII arrow
    out << "1 2 1 1 2 -> 7\n";                                  // wrong value
    out << "1 2 3 1 2 -> 1\n";                                  // weight above level
    out << "garbage\n";
  }
  fusion_cache::clear();
  CHECK(fusion_cache::load(file) == 2);
  CHECK(fusion_coefficient({1}, 2, W({1}), W({1}), W({2})) == 1);
  std::filesystem::remove_all(dir);
}
