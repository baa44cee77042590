#include "cbchern/weights.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "cbchern/errors.hpp"

namespace cbchern {

Weight::Weight(std::vector<int> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw PreconditionError("weight needs at least one label");
  for (int a : labels_) {
    if (a < 0) throw PreconditionError("negative Dynkin label");
  }
}

Weight Weight::zero(int r) { return Weight(std::vector<int>(r, 0)); }

Weight Weight::fundamental(int r, int i, int multiple) {
  if (i < 1 || i > r) throw PreconditionError("fundamental weight index out of range");
  std::vector<int> labels(r, 0);
  labels[i - 1] = multiple;
  return Weight(std::move(labels));
}

Weight Weight::from_partition(int r, std::span<const int> rows) {
  if (static_cast<int>(rows.size()) > r + 1 &&
      std::any_of(rows.begin() + r + 1, rows.end(), [](int x) { return x != 0; })) {
    throw PreconditionError("diagram has more than r+1 rows");
  }
  std::vector<int> padded(r + 1, 0);
  std::copy_n(rows.begin(), std::min<std::size_t>(rows.size(), r + 1), padded.begin());
  for (int i = 0; i < r; ++i) {
    if (padded[i] < padded[i + 1]) throw PreconditionError("rows are not a partition");
  }
  std::vector<int> labels(r);
  for (int i = 0; i < r; ++i) labels[i] = padded[i] - padded[i + 1];
  return Weight(std::move(labels));
}

std::vector<int> Weight::partition() const {
  std::vector<int> rows(labels_.size());
  int acc = 0;
  for (int i = r() - 1; i >= 0; --i) {
    acc += labels_[i];
    rows[i] = acc;
  }
  return rows;
}

int Weight::boxes() const {
  int total = 0;
  for (int i = 0; i < r(); ++i) total += (i + 1) * labels_[i];
  return total;
}

bool Weight::is_zero() const {
  return std::all_of(labels_.begin(), labels_.end(), [](int a) { return a == 0; });
}

std::string Weight::str() const {
  std::string out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(labels_[i]);
  }
  return out;
}

std::vector<Weight> enumerate_weights(AlgebraSpec alg, int level) {
  if (alg.r < 1) throw PreconditionError("algebra rank must be positive");
  if (level < 1) throw PreconditionError("level must be positive");
  std::vector<Weight> out;
  std::vector<int> labels(alg.r, 0);
  // Odometer over labels with bounded sum; produces lexicographic order.
  auto rec = [&](auto&& self, int pos, int budget) -> void {
    if (pos == alg.r) {
      out.emplace_back(labels);
      return;
    }
    for (int a = 0; a <= budget; ++a) {
      labels[pos] = a;
      self(self, pos + 1, budget - a);
    }
    labels[pos] = 0;
  };
  rec(rec, 0, level);
  return out;
}

int theta_pairing(const Weight& lambda) {
  return std::accumulate(lambda.labels().begin(), lambda.labels().end(), 0);
}

bool at_level(AlgebraSpec alg, int level, const Weight& lambda) {
  return lambda.r() == alg.r && theta_pairing(lambda) <= level;
}

Rational inner_product(AlgebraSpec alg, const Weight& a, const Weight& b) {
  if (a.r() != alg.r || b.r() != alg.r) throw PreconditionError("weight rank does not match algebra");
  const int h = alg.r + 1;
  Rational total = 0;
  for (int i = 1; i <= alg.r; ++i) {
    if (a[i - 1] == 0) continue;
    for (int j = 1; j <= alg.r; ++j) {
      if (b[j - 1] == 0) continue;
      Rational gram(std::min(i, j) * h - i * j, h);
      gram.canonicalize();
      total += gram * a[i - 1] * b[j - 1];
    }
  }
  return total;
}

Rational casimir_w(AlgebraSpec alg, int level, const Weight& lambda) {
  if (!at_level(alg, level, lambda)) {
    throw PreconditionError("weight " + lambda.str() + " is not at level " + std::to_string(level));
  }
  std::vector<int> shifted = lambda.labels();
  for (int& a : shifted) a += 2;
  Rational num = inner_product(alg, lambda, Weight(std::move(shifted)));
  Rational w = num / Rational(2 * (alg.dual_coxeter() + level));
  w.canonicalize();
  return w;
}

Weight dual_weight(const Weight& lambda) {
  std::vector<int> labels(lambda.labels().rbegin(), lambda.labels().rend());
  return Weight(std::move(labels));
}

Weight transpose_weight(AlgebraSpec alg, int level, const Weight& lambda) {
  if (lambda.r() != alg.r) throw PreconditionError("weight rank does not match algebra");
  if (level < 1) throw PreconditionError("level must be positive");
  const std::vector<int> rows = lambda.partition();
  if (!rows.empty() && rows.front() > level) {
    throw PreconditionError("diagram of " + lambda.str() + " exceeds the r x level box");
  }
  // Column c (1-based) of the diagram has height #{i : rows[i] >= c}.
  std::vector<int> cols(level, 0);
  for (int c = 1; c <= level; ++c) {
    cols[c - 1] = static_cast<int>(std::count_if(rows.begin(), rows.end(), [c](int x) { return x >= c; }));
  }
  return Weight::from_partition(level, cols);
}

Weight parse_weight(AlgebraSpec alg, std::string_view text) {
  std::vector<int> labels;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    std::string_view token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    int value = 0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || end != token.data() + token.size() || value < 0) {
      throw ParseError("bad weight label '" + std::string(token) + "' in \"" + std::string(text) + "\"");
    }
    labels.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (labels.size() == 1 && labels[0] == 0) return Weight::zero(alg.r);
  if (static_cast<int>(labels.size()) != alg.r) {
    throw ParseError("weight \"" + std::string(text) + "\" has " + std::to_string(labels.size()) +
                     " labels, expected " + std::to_string(alg.r));
  }
  return Weight(std::move(labels));
}

}  // namespace cbchern
