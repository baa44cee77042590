#include "cbchern/cones.hpp"

#include <algorithm>

#include "cbchern/errors.hpp"

namespace cbchern {

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::fakhruddin: return "fakhruddin";
    case BasisKind::sl2_levels: return "b1";
    case BasisKind::level_one_fundamental: return "b2";
  }
  return "?";
}

BasisKind parse_basis_kind(std::string_view text) {
  if (text == "fakhruddin") return BasisKind::fakhruddin;
  if (text == "b1" || text == "B1" || text == "sl2_levels") return BasisKind::sl2_levels;
  if (text == "b2" || text == "B2" || text == "level_one_fundamental") return BasisKind::level_one_fundamental;
  throw ParseError("unknown basis kind \"" + std::string(text) + "\"");
}

namespace {

void finish(BasisFamily& family) {
  for (const BundleSpec& spec : family.members) {
    family.ranks.push_back(rank(spec));
    family.pulled_back.push_back(
        std::any_of(spec.weights.begin(), spec.weights.end(), [](const Weight& w) { return w.is_zero(); }));
  }
}

}  // namespace

BasisFamily fakhruddin_basis(int n) {
  if (n < 4 || n > kMaxPoints) throw PreconditionError("fakhruddin basis needs 4 <= n <= 20");
  BasisFamily family{BasisKind::fakhruddin, n, {}, {}, {}};
  const AlgebraSpec sl2{1};
  for (PointSet support = all_points(n);; --support) {
    const int count = popcount(support);
    if (count >= 4 && count % 2 == 0) {
      BundleSpec spec{sl2, 1, {}};
      for (int p = 1; p <= n; ++p) spec.weights.push_back((support & point_bit(p)) ? Weight({1}) : Weight::zero(1));
      family.members.push_back(std::move(spec));
    }
    if (support == 0) break;
  }
  finish(family);
  return family;
}

BasisFamily invariant_basis(int n, BasisKind kind) {
  if (n < 4 || n > kMaxPoints) throw PreconditionError("invariant bases need 4 <= n <= 20");
  BasisFamily family{kind, n, {}, {}, {}};
  if (kind == BasisKind::sl2_levels) {
    const int even = n % 2 == 0 ? n : n - 1;
    const int g = even / 2 - 1;
    for (int level = 1; level <= g; ++level) {
      BundleSpec spec{AlgebraSpec{1}, level, std::vector<Weight>(even, Weight({1}))};
      if (even != n) spec.weights.push_back(Weight::zero(1));
      family.members.push_back(std::move(spec));
    }
  } else if (kind == BasisKind::level_one_fundamental) {
    const AlgebraSpec alg{n - 1};
    for (int i = 2; i <= n / 2; ++i) {
      family.members.push_back(BundleSpec{alg, 1, std::vector<Weight>(n, Weight::fundamental(n - 1, i))});
    }
  } else {
    throw PreconditionError("fakhruddin is not an invariant basis");
  }
  finish(family);
  return family;
}

BasisFamily basis(int n, BasisKind kind) {
  return kind == BasisKind::fakhruddin ? fakhruddin_basis(n) : invariant_basis(n, kind);
}

ChowClass schur_from_chern(const std::vector<ChowClass>& c, const std::vector<int>& partition) {
  if (partition.empty()) throw PreconditionError("empty partition");
  for (std::size_t i = 0; i < partition.size(); ++i) {
    if (partition[i] < 1 || (i > 0 && partition[i] > partition[i - 1])) {
      throw PreconditionError("not a partition");
    }
  }
  const int n = c.front().n();
  // Conjugate partition.
  std::vector<int> conj(partition.front(), 0);
  for (int row : partition) {
    for (int j = 0; j < row; ++j) ++conj[j];
  }
  const int size = static_cast<int>(conj.size());
  auto entry = [&](int i, int j) -> const ChowClass* {
    const int idx = conj[i] - i + j;
    if (idx < 0) return nullptr;
    if (idx >= static_cast<int>(c.size())) throw PreconditionError("not enough Chern classes for this partition");
    return &c[idx];
  };
  // Laplace expansion along the first row, recursively on column subsets.
  std::vector<int> cols(size);
  for (int j = 0; j < size; ++j) cols[j] = j;
  auto det = [&](auto&& self, int row, std::vector<int>& remaining) -> ChowClass {
    if (row == size) return ChowClass::fundamental(n);
    ChowClass total(n);
    for (std::size_t t = 0; t < remaining.size(); ++t) {
      const ChowClass* e = entry(row, remaining[t]);
      if (e == nullptr || e->empty()) continue;
      std::vector<int> rest = remaining;
      rest.erase(rest.begin() + static_cast<long>(t));
      ChowClass minor = self(self, row + 1, rest);
      if (minor.empty()) continue;
      ChowClass term = drop_vanishing(product(*e, minor));
      if (t % 2) term *= Rational(-1);
      total += term;
    }
    return total;
  };
  return det(det, 0, cols);
}

ChowClass schur_class(const BundleSpec& spec, const std::vector<int>& partition) {
  if (partition.empty()) throw PreconditionError("empty partition");
  // The largest index in the determinant is lambda'_1 + size - 1 = rows + cols - 1.
  const int top = static_cast<int>(partition.size()) + partition.front() - 1;
  return schur_from_chern(chern_classes(spec, top), partition);
}

PliantGenerators pliant_generators(int n, int m, const BasisFamily& family) {
  if (m < 1 || m > n - 3) throw PreconditionError("pliant degree must satisfy 1 <= m <= n-3");
  if (family.n != n) throw PreconditionError("basis family lives on a different M_{0,n}");
  std::vector<ChowClass> c1;
  for (const BundleSpec& spec : family.members) c1.push_back(first_chern(spec));

  PliantGenerators out;
  std::vector<int> pick;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(pick.size()) == m) {
      ChowClass monomial = ChowClass::fundamental(n);
      for (int i : pick) monomial = drop_vanishing(product(monomial, c1[i]));
      out.raw_indices.push_back(pick);
      out.raw.push_back(std::move(monomial));
      return;
    }
    for (int i = start; i < static_cast<int>(c1.size()); ++i) {
      pick.push_back(i);
      self(self, i);
      pick.pop_back();
    }
  };
  rec(rec, 0);

  std::vector<std::vector<Rational>> signatures;
  for (std::size_t i = 0; i < out.raw.size(); ++i) {
    std::vector<Rational> sig = pairing_vector(out.raw[i], m);
    if (std::find(signatures.begin(), signatures.end(), sig) != signatures.end()) continue;
    signatures.push_back(std::move(sig));
    out.kept.push_back(i);
  }
  return out;
}

}  // namespace cbchern
