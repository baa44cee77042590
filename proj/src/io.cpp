#include "cbchern/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "cbchern/errors.hpp"

namespace cbchern {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t at = text.find(sep, pos);
    out.push_back(trim(text.substr(pos, at == std::string_view::npos ? std::string_view::npos : at - pos)));
    if (at == std::string_view::npos) break;
    pos = at + 1;
  }
  return out;
}

int parse_int(std::string_view token, std::string_view context) {
  int value = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
    throw ParseError("bad integer '" + std::string(token) + "' in \"" + std::string(context) + "\"");
  }
  return value;
}

Json set_json(PointSet s) { return Json(members(s)); }

}  // namespace

AlgebraSpec parse_algebra(std::string_view text) {
  text = trim(text);
  if (text.size() < 3 || std::tolower(static_cast<unsigned char>(text[0])) != 's' ||
      std::tolower(static_cast<unsigned char>(text[1])) != 'l') {
    throw ParseError("algebra must look like slN, got \"" + std::string(text) + "\"");
  }
  const int size = parse_int(text.substr(2), text);
  if (size < 2 || size > 64) throw ParseError("slN needs 2 <= N <= 64");
  return AlgebraSpec{size - 1};
}

std::vector<Weight> parse_weight_list(AlgebraSpec alg, std::string_view text) {
  if (trim(text).empty()) throw ParseError("empty weight list");
  std::vector<Weight> out;
  for (std::string_view token : split(text, ';')) out.push_back(parse_weight(alg, token));
  return out;
}

std::vector<PointSet> parse_parts(int n, std::string_view text) {
  std::vector<PointSet> out;
  for (std::string_view part : split(text, '|')) {
    PointSet set = 0;
    for (std::string_view token : split(part, ',')) {
      const int p = parse_int(token, text);
      if (p < 1 || p > n) throw PreconditionError("point " + std::to_string(p) + " is not in 1.." + std::to_string(n));
      if (set & point_bit(p)) throw PreconditionError("point " + std::to_string(p) + " repeated in a part");
      set |= point_bit(p);
    }
    out.push_back(set);
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (std::string_view token : split(text, ',')) out.push_back(parse_int(token, text));
  return out;
}

Json to_json(const Weight& w) { return Json(w.labels()); }

Json to_json(const BundleSpec& spec) {
  Json weights = Json::array();
  for (const Weight& w : spec.weights) weights.push_back(to_json(w));
  return Json{{"algebra", spec.alg.name()}, {"level", spec.level}, {"weights", std::move(weights)}};
}

Json to_json(const ChowClass& c) {
  Json terms = Json::array();
  for (const auto& [m, coeff] : c.terms()) {
    Json deltas = Json::array();
    for (const auto& [set, power] : m.deltas) deltas.push_back(Json{{"set", set_json(set)}, {"power", power}});
    terms.push_back(Json{{"coeff", to_string(coeff)}, {"psi", m.psi}, {"deltas", std::move(deltas)}});
  }
  return Json{{"n", c.n()}, {"terms", std::move(terms)}};
}

Json to_json(const VerificationReport& report) {
  Json hyps = Json::array();
  for (const Hypothesis& h : report.hypotheses) {
    hyps.push_back(Json{{"name", h.name}, {"holds", h.holds}, {"detail", h.detail}});
  }
  Json witnesses = Json::array();
  for (const WitnessPairing& w : report.witness_pairings) {
    Json stratum = Json::array();
    for (PointSet s : w.stratum) stratum.push_back(set_json(s));
    witnesses.push_back(Json{{"stratum", std::move(stratum)}, {"lhs", to_string(w.lhs)}, {"rhs", to_string(w.rhs)}});
  }
  return Json{{"identity", report.identity},
              {"hypotheses", std::move(hyps)},
              {"holds", report.holds},
              {"witness_pairings", std::move(witnesses)}};
}

Json to_json(const ExtremalityCertificate& cert) {
  Json parts = Json::array(), stratum = Json::array();
  for (PointSet s : cert.parts) parts.push_back(set_json(s));
  for (PointSet s : cert.stratum) stratum.push_back(set_json(s));
  return Json{{"k", cert.k},
              {"parts", std::move(parts)},
              {"stratum", std::move(stratum)},
              {"box_sum", cert.box_sum},
              {"theta_sum", cert.theta_sum},
              {"critical_hypothesis", cert.critical_hypothesis},
              {"theta_hypothesis_boxes", cert.theta_hypothesis_boxes},
              {"theta_hypothesis_theta", cert.theta_hypothesis_theta},
              {"pairing", to_string(cert.pairing)},
              {"certified", cert.certified()}};
}

Json to_json(const BasisFamily& family) {
  Json members = Json::array();
  for (const BundleSpec& spec : family.members) members.push_back(to_json(spec));
  return Json{{"kind", to_string(family.kind)},
              {"n", family.n},
              {"members", std::move(members)},
              {"ranks", family.ranks},
              {"pulled_back", family.pulled_back}};
}

Json to_json(const LevelReport& report) {
  Json out;
  out["critical_level"] = report.critical_level ? Json(to_string(*report.critical_level)) : Json(nullptr);
  out["critical_position"] = report.critical_position ? Json(to_string(*report.critical_position)) : Json(nullptr);
  out["theta_level"] = to_string(report.theta_level);
  out["theta_position"] = to_string(report.theta_position);
  return out;
}

ChowClass chow_from_json(const Json& doc) {
  try {
    if (!doc.is_object()) throw ParseError("class document must be an object");
    const int n = doc.at("n").get<int>();
    if (n < 3 || n > kMaxPoints) throw ParseError("class n must lie in 3..20");
    ChowClass out(n);
    for (const Json& term : doc.at("terms")) {
      const Rational coeff = parse_rational(term.at("coeff").get<std::string>());
      TautMonomial m{term.at("psi").get<std::vector<int>>(), {}};
      if (static_cast<int>(m.psi.size()) != n) throw ParseError("psi exponent list must have n entries");
      if (std::any_of(m.psi.begin(), m.psi.end(), [](int e) { return e < 0; })) {
        throw ParseError("negative psi exponent");
      }
      ChowClass monomial = ChowClass::fundamental(n);
      for (const Json& d : term.at("deltas")) {
        const auto pts = d.at("set").get<std::vector<int>>();
        const int power = d.at("power").get<int>();
        if (power < 1) throw ParseError("delta power must be positive");
        for (int p : pts) {
          if (p < 1 || p > n) throw ParseError("delta set point out of range");
        }
        ChowClass factor = ChowClass::delta(n, point_set(pts));
        for (int t = 0; t < power; ++t) monomial = product(monomial, factor);
      }
      ChowClass psi_part(n);
      psi_part.add(m, coeff);
      out += product(psi_part, monomial);
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("class document: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("class document: ") + e.what());
  }
}

ChowClass chow_from_json_text(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return chow_from_json(doc);
}

std::string set_text(PointSet s) {
  std::string out = "{";
  bool first = true;
  for (int p : members(s)) {
    if (!first) out += ',';
    out += std::to_string(p);
    first = false;
  }
  return out + "}";
}

std::string to_text(const ChowClass& c) {
  if (c.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, coeff] : c.terms()) {
    Rational shown = coeff;
    if (first) {
      if (sgn(coeff) < 0) out << "-";
    } else {
      out << (sgn(coeff) < 0 ? " - " : " + ");
    }
    if (sgn(shown) < 0) shown = -shown;
    first = false;
    std::vector<std::string> factors;
    for (int i = 0; i < c.n(); ++i) {
      if (m.psi[i] == 0) continue;
      factors.push_back("psi" + std::to_string(i + 1) + (m.psi[i] > 1 ? "^" + std::to_string(m.psi[i]) : ""));
    }
    for (const auto& [set, power] : m.deltas) {
      factors.push_back("D" + set_text(set) + (power > 1 ? "^" + std::to_string(power) : ""));
    }
    if (factors.empty()) {
      out << to_string(shown);
      continue;
    }
    if (shown != 1) out << to_string(shown) << "*";
    for (std::size_t i = 0; i < factors.size(); ++i) out << (i ? "*" : "") << factors[i];
  }
  return out.str();
}

std::string to_text(const VerificationReport& report) {
  std::ostringstream out;
  out << report.identity << '\n';
  for (const Hypothesis& h : report.hypotheses) {
    out << "  hypothesis " << h.name << ": " << (h.holds ? "yes" : "no") << " (" << h.detail << ")\n";
  }
  out << "  holds: " << (report.holds ? "true" : "false") << '\n';
  for (const WitnessPairing& w : report.witness_pairings) {
    out << "  pairing";
    for (PointSet s : w.stratum) out << ' ' << set_text(s);
    out << ": " << to_string(w.lhs) << " vs " << to_string(w.rhs) << '\n';
  }
  return out.str();
}

std::string to_text(const BasisFamily& family) {
  std::ostringstream out;
  out << to_string(family.kind) << " basis on M_{0," << family.n << "}: " << family.members.size() << " members\n";
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    const BundleSpec& spec = family.members[i];
    out << "  " << spec.alg.name() << " level " << spec.level << " [";
    for (std::size_t j = 0; j < spec.weights.size(); ++j) out << (j ? "; " : "") << spec.weights[j].str();
    out << "] rank " << family.ranks[i] << (family.pulled_back[i] ? " (pulled back)" : "") << '\n';
  }
  return out.str();
}

}  // namespace cbchern
