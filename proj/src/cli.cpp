#include "cbchern/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "cbchern/errors.hpp"
#include "cbchern/io.hpp"

namespace cbchern {

namespace {

struct Options {
  std::string algebra = "sl2";
  int level = 1;
  std::string weights;
  std::string format = "json";
  std::optional<int> k, m, n;
  std::string parts;
  bool chain = false;
  bool pair_top = false;
  std::string kind;
  std::string partition;
  std::string class_file;
  std::string mu_weights;
  int mu_level = 1;
  std::string variant = "additive";
  bool raw = false;
};

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  bool json() const { return o_.format == "json"; }

  BundleSpec spec() const {
    if (o_.weights.empty()) throw ParseError("--weights is required");
    const AlgebraSpec alg = parse_algebra(o_.algebra);
    BundleSpec s{alg, o_.level, parse_weight_list(alg, o_.weights)};
    s.validate();
    return s;
  }

  int need(const std::optional<int>& v, const char* flag) const {
    if (!v) throw ParseError(std::string(flag) + " is required");
    return *v;
  }

  void emit(const Json& doc, const std::string& text) {
    if (json()) {
      out_ << doc.dump(2) << '\n';
    } else {
      out_ << text << (text.empty() || text.back() != '\n' ? "\n" : "");
    }
  }

  int emit_class(const ChowClass& c) {
    if (o_.pair_top) {
      const auto deg = c.degree();
      if (deg && *deg != c.n() - 3) throw PreconditionError("--pair-top needs a top-degree class");
      out_ << to_string(integrate(c)) << '\n';
    } else {
      emit(to_json(c), to_text(c));
    }
    return kExitOk;
  }

  int rank_cmd() {
    out_ << rank(spec()) << '\n';
    return kExitOk;
  }

  int weights_cmd() {
    const AlgebraSpec alg = parse_algebra(o_.algebra);
    if (o_.level < 1) throw PreconditionError("level must be positive");
    std::vector<Weight> list;
    if (o_.weights.empty()) {
      list = enumerate_weights(alg, o_.level);
    } else {
      list = parse_weight_list(alg, o_.weights);
    }
    Json doc = Json::array();
    std::ostringstream text;
    for (const Weight& w : list) {
      const Rational cw = casimir_w(alg, o_.level, w);
      doc.push_back(Json{{"weight", to_json(w)},
                         {"boxes", w.boxes()},
                         {"theta", theta_pairing(w)},
                         {"w", to_string(cw)},
                         {"dual", to_json(dual_weight(w))},
                         {"transpose", to_json(transpose_weight(alg, o_.level, w))}});
      text << "(" << w.str() << ")  w = " << to_string(cw) << "  boxes " << w.boxes() << "  theta "
           << theta_pairing(w) << '\n';
    }
    if (!o_.weights.empty() && list.size() >= 3) {
      const LevelReport lv = levels(spec());
      doc = Json{{"weights", std::move(doc)}, {"levels", to_json(lv)}};
      text << "critical level " << (lv.critical_level ? to_string(*lv.critical_level) : "undefined")
           << ", theta level " << to_string(lv.theta_level) << '\n';
    }
    emit(doc, text.str());
    return kExitOk;
  }

  ChowClass load_class() const {
    std::string body;
    if (o_.class_file == "-") {
      body.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
      std::ifstream in(o_.class_file);
      if (!in) throw ParseError("cannot read class file " + o_.class_file);
      body.assign(std::istreambuf_iterator<char>(in), {});
    }
    return chow_from_json_text(body);
  }

  int integrate_cmd() {
    if (o_.class_file.empty()) throw ParseError("--class is required");
    out_ << to_string(integrate(load_class())) << '\n';
    return kExitOk;
  }

  int pair_cmd() {
    ChowClass c(3);
    int n = 0;
    if (!o_.class_file.empty()) {
      c = load_class();
      n = c.n();
    } else {
      const BundleSpec s = spec();
      n = s.points();
      if (o_.m) {
        c = chern_class(s, *o_.m);
      } else if (o_.k) {
        c = chern_character_part(s, *o_.k);
      } else {
        c = first_chern(s);
      }
    }
    if (o_.parts.empty()) throw ParseError("--parts is required");
    NestedChain chain{o_.chain ? NestedChain::Kind::chain : NestedChain::Kind::fcycle, n, parse_parts(n, o_.parts)};
    chain.validate();
    const std::vector<PointSet> family = stratum_family(chain);
    const auto deg = c.degree();
    if (deg && *deg + static_cast<int>(family.size()) != n - 3) {
      throw PreconditionError("class and stratum do not have complementary dimension");
    }
    out_ << to_string(pair_with_stratum(c, family)) << '\n';
    return kExitOk;
  }

  int report(const VerificationReport& r) {
    emit(to_json(r), to_text(r));
    if (!r.hypotheses_hold()) return kExitHypothesis;
    return r.holds ? kExitOk : kExitIdentityFalse;
  }

  int verify_additive_cmd() {
    const BundleSpec nu = spec();
    if (o_.mu_weights.empty()) throw ParseError("--mu-weights is required");
    BundleSpec mu{nu.alg, o_.mu_level, parse_weight_list(nu.alg, o_.mu_weights)};
    mu.validate();
    const int m = need(o_.m ? o_.m : o_.k, "--m");
    if (o_.variant == "additive") return report(verify_additive(nu, mu, m));
    if (o_.variant == "line-twist") return report(verify_line_twist(nu, mu, m));
    throw ParseError("--variant must be additive or line-twist");
  }

  int verify_extremal_cmd() {
    const BundleSpec s = spec();
    const int k = need(o_.k, "--k");
    if (o_.parts.empty()) throw ParseError("--parts is required");
    NestedChain partition{NestedChain::Kind::fcycle, s.points(), parse_parts(s.points(), o_.parts)};
    const ExtremalityCertificate cert = extremality_certificate(s, k, partition);
    VerificationReport r;
    r.identity = "extremality: c_" + std::to_string(k) + " contracts the F-cycle stratum";
    r.hypotheses.push_back({"boxes <= level + r", cert.critical_hypothesis,
                            "sum of the k+2 smallest part box counts is " + std::to_string(cert.box_sum)});
    r.hypotheses.push_back({"boxes <= level + 1", cert.theta_hypothesis_boxes,
                            "sum of the k+2 smallest part box counts is " + std::to_string(cert.box_sum)});
    r.hypotheses.push_back({"theta <= level + 1", cert.theta_hypothesis_theta,
                            "sum of the k+2 smallest part theta pairings is " + std::to_string(cert.theta_sum)});
    r.holds = cert.pairing == 0;
    r.witness_pairings.push_back({cert.stratum, cert.pairing, Rational(0)});
    if (json()) {
      Json doc = to_json(r);
      doc["certificate"] = to_json(cert);
      out_ << doc.dump(2) << '\n';
    } else {
      out_ << to_text(r);
    }
    if (!cert.any_hypothesis()) return kExitHypothesis;
    return cert.certified() ? kExitOk : kExitIdentityFalse;
  }

  BasisFamily family() const {
    const int n = need(o_.n, "--n");
    return basis(n, parse_basis_kind(o_.kind.empty() ? "fakhruddin" : o_.kind));
  }

  int basis_cmd() {
    const BasisFamily f = family();
    emit(to_json(f), to_text(f));
    return kExitOk;
  }

  int pliant_cmd() {
    const BasisFamily f = family();
    const int m = need(o_.m, "--m");
    const PliantGenerators g = pliant_generators(f.n, m, f);
    Json gens = Json::array();
    std::ostringstream text;
    auto add = [&](std::size_t i) {
      gens.push_back(Json{{"factors", g.raw_indices[i]}, {"class", to_json(g.raw[i])}});
      text << "c1 product of members";
      for (int idx : g.raw_indices[i]) text << ' ' << idx;
      text << ": " << to_text(g.raw[i]) << '\n';
    };
    if (o_.raw) {
      for (std::size_t i = 0; i < g.raw.size(); ++i) add(i);
    } else {
      for (std::size_t i : g.kept) add(i);
    }
    emit(Json{{"kind", to_string(f.kind)},
              {"n", f.n},
              {"m", m},
              {"raw_count", g.raw.size()},
              {"generators", std::move(gens)}},
         text.str());
    return kExitOk;
  }

 private:
  const Options& o_;
  std::ostream& out_;
};

std::optional<std::filesystem::path> cache_file() {
  const char* dir = std::getenv("CB_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return std::filesystem::path(dir) / "fusion.cache";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chern classes of conformal-blocks bundles on M_{0,n}", "cbchern"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool with_spec) {
    if (with_spec) {
      sub->add_option("--algebra", o.algebra, "Lie algebra, slN");
      sub->add_option("--level", o.level, "level");
      sub->add_option("--weights", o.weights, "weights, e.g. \"1,0;0,1;0\"");
    }
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };
  auto classy = [&](CLI::App* sub) { sub->add_flag("--pair-top", o.pair_top, "integrate the top-degree class"); };

  std::vector<std::pair<CLI::App*, int (Runner::*)()>> handlers;
  auto add = [&](const char* name, const char* help, int (Runner::*fn)()) {
    CLI::App* sub = app.add_subcommand(name, help);
    handlers.emplace_back(sub, fn);
    return sub;
  };

  auto* rank_sub = add("rank", "rank of the bundle", &Runner::rank_cmd);
  common(rank_sub, true);

  auto* weights_sub = add("weights", "level-l weights with Casimir scalars", &Runner::weights_cmd);
  common(weights_sub, true);

  auto* c1_sub = add("c1", "first Chern class", nullptr);
  common(c1_sub, true);
  classy(c1_sub);

  auto* chern_sub = add("chern", "Chern class c_m", nullptr);
  common(chern_sub, true);
  classy(chern_sub);
  chern_sub->add_option("--m,--k", o.m, "degree")->required();

  auto* ch_sub = add("ch", "Chern character part ch_k", nullptr);
  common(ch_sub, true);
  classy(ch_sub);
  ch_sub->add_option("--k,--m", o.k, "degree")->required();

  auto* schur_sub = add("schur", "Schur class of a partition", nullptr);
  common(schur_sub, true);
  classy(schur_sub);
  schur_sub->add_option("--partition", o.partition, "partition, e.g. \"2,1\"")->required();

  auto* integrate_sub = add("integrate", "degree of a top-degree class", &Runner::integrate_cmd);
  integrate_sub->add_option("--class", o.class_file, "class JSON file, - for stdin")->required();

  auto* pair_sub = add("pair", "pair a class with a boundary stratum", &Runner::pair_cmd);
  common(pair_sub, true);
  pair_sub->add_option("--class", o.class_file, "class JSON file, - for stdin");
  pair_sub->add_option("--m", o.m, "pair c_m");
  pair_sub->add_option("--k", o.k, "pair ch_k");
  pair_sub->add_option("--parts", o.parts, "F-cycle partition or chain parts, e.g. \"1|2|3|4,5\"")->required();
  pair_sub->add_flag("--chain", o.chain, "parts build a nested chain instead of an F-cycle");

  auto* additive_sub = add("verify-additive", "tensor-product identity", &Runner::verify_additive_cmd);
  common(additive_sub, true);
  additive_sub->add_option("--mu-weights", o.mu_weights, "weights of the second factor");
  additive_sub->add_option("--mu-level", o.mu_level, "level of the second factor");
  additive_sub->add_option("--m,--k", o.m, "Chern degree");
  additive_sub->add_option("--variant", o.variant, "additive or line-twist");

  auto* critical_sub = add("verify-critical", "critical-level identity", nullptr);
  common(critical_sub, true);
  critical_sub->add_option("--k,--m", o.k, "Chern degree")->required();

  auto* vanishing_sub = add("verify-vanishing", "vanishing above the critical or theta level", nullptr);
  common(vanishing_sub, true);
  vanishing_sub->add_option("--k,--m", o.k, "largest degree checked (default n-3)");

  auto* extremal_sub = add("verify-extremal", "extremality certificate for an F-cycle", &Runner::verify_extremal_cmd);
  common(extremal_sub, true);
  extremal_sub->add_option("--k", o.k, "dimension of the F-cycle")->required();
  extremal_sub->add_option("--parts", o.parts, "partition, e.g. \"1|2|3|4,5\"")->required();

  auto* basis_sub = add("basis", "basis families", &Runner::basis_cmd);
  common(basis_sub, false);
  basis_sub->add_option("--kind", o.kind, "fakhruddin, b1 or b2");
  basis_sub->add_option("--n", o.n, "number of points")->required();

  auto* pliant_sub = add("pliant", "monomial generators in first Chern classes", &Runner::pliant_cmd);
  common(pliant_sub, false);
  pliant_sub->add_option("--kind", o.kind, "fakhruddin, b1 or b2");
  pliant_sub->add_option("--n", o.n, "number of points")->required();
  pliant_sub->add_option("--m", o.m, "degree")->required();
  pliant_sub->add_flag("--raw", o.raw, "keep numerically equal monomials");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "cbchern: " << e.what() << '\n';
    return kExitParse;
  }

  const auto cache = cache_file();
  if (cache) fusion_cache::load(*cache);

  int code = kExitOk;
  try {
    Runner runner(o, out);
    if (c1_sub->parsed()) {
      code = runner.emit_class(first_chern(runner.spec()));
    } else if (chern_sub->parsed()) {
      code = runner.emit_class(chern_class(runner.spec(), *o.m));
    } else if (ch_sub->parsed()) {
      code = runner.emit_class(chern_character_part(runner.spec(), *o.k));
    } else if (schur_sub->parsed()) {
      code = runner.emit_class(schur_class(runner.spec(), parse_int_list(o.partition)));
    } else if (critical_sub->parsed()) {
      code = runner.report(verify_critical(runner.spec(), *o.k));
    } else if (vanishing_sub->parsed()) {
      const BundleSpec s = runner.spec();
      code = runner.report(verify_vanishing(s, o.k.value_or(std::max(1, s.points() - 3))));
    } else {
      for (const auto& [sub, fn] : handlers) {
        if (sub->parsed() && fn != nullptr) code = (runner.*fn)();
      }
    }
  } catch (const ParseError& e) {
    err << "cbchern: parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const PreconditionError& e) {
    err << "cbchern: precondition violated: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "cbchern: error: " << e.what() << '\n';
    return kExitIdentityFalse;
  }

  if (cache) {
    try {
      std::filesystem::create_directories(cache->parent_path());
      fusion_cache::save(*cache);
    } catch (const std::exception& e) {
      err << "cbchern: warning: could not save fusion cache: " << e.what() << '\n';
    }
  }
  return code;
}

}  // namespace cbchern
