#include "cbchern/rational.hpp"

#include <cctype>

#include "cbchern/errors.hpp"

namespace cbchern {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  const std::size_t slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_int(num) || !is_int(den) || den.front() == '-' || den.front() == '+') {
    throw ParseError("malformed rational \"" + std::string(text) + "\"");
  }
  std::string n(num);
  if (n.front() == '+') n.erase(0, 1);
  mpz_class p(n), q{std::string(den)};
  if (q == 0) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
  Rational out(p, q);
  out.canonicalize();
  return out;
}

Rational factorial(int k) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
  return Rational(f);
}

Rational binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(b);
}

}  // namespace cbchern
