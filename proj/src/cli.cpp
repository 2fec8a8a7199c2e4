#include "siegel3/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "siegel3/bridge.hpp"
#include "siegel3/error.hpp"
#include "siegel3/forms.hpp"
#include "siegel3/hilbert.hpp"
#include "siegel3/quartics.hpp"
#include "siegel3/ringlab.hpp"

#ifndef SIEGEL3_DATA_DIR
#define SIEGEL3_DATA_DIR "data"
#endif

namespace siegel3 {
namespace {

std::string gap_text(double g) { return std::isfinite(g) ? "2^" + std::to_string(static_cast<int>(g)) : "n/a"; }

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  bool json = false;
  int prec = 0;  // 0: per-command default
  std::uint64_t tau_seed = 20250101;
  std::string fixtures;
  std::string forms_cache;

  mp::Bits bits(int fallback) const { return prec > 0 ? prec : fallback; }
  std::optional<fs::path> cache() const {
    if (forms_cache.empty()) return std::nullopt;
    return fs::path(forms_cache);
  }
};

/// One line per check in text mode, an array of objects in JSON mode.
class Report {
 public:
  Report(std::string command, const Globals& g) : command_(std::move(command)), g_(g) {}

  void check(const std::string& key, bool pass, json detail, const std::string& text) {
    all_pass_ = all_pass_ && pass;
    detail["key"] = key;
    detail["pass"] = pass;
    checks_.push_back(std::move(detail));
    lines_.push_back((pass ? "PASS " : "FAIL ") + key + "  " + text);
  }
  void info(json detail, const std::string& text) {
    checks_.push_back(std::move(detail));
    lines_.push_back(text);
  }
  void fail(const std::string& key, const Error& e) {
    check(key, false, {{"error", e.kind()}, {"message", e.what()}}, e.what());
  }

  int finish(std::ostream& out) const {
    if (g_.json) {
      out << json{{"command", command_}, {"pass", all_pass_}, {"results", checks_}}.dump(1) << '\n';
    } else {
      for (const auto& l : lines_) out << l << '\n';
      out << (all_pass_ ? "all checks passed" : "some checks FAILED") << '\n';
    }
    return all_pass_ ? kExitPass : kExitFail;
  }

 private:
  std::string command_;
  const Globals& g_;
  json checks_ = json::array();
  std::vector<std::string> lines_;
  bool all_pass_ = true;
};

std::string sci(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << std::scientific << v;
  return s.str();
}

std::string complex_string(const mp::Complex& z, int digits) {
  return z.re.to_string(digits) + (z.im.to_double() < 0 ? " - " : " + ") +
         (z.im.to_double() < 0 ? (-z.im).to_string(digits) : z.im.to_string(digits)) + "*i";
}

/// "0..48", "4..28:2", "4,6,8" or a mix.  Throws CLI::ValidationError.
std::vector<int> parse_weights(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      auto dots = part.find("..");
      if (dots == std::string::npos) {
        out.push_back(std::stoi(part));
        continue;
      }
      int lo = std::stoi(part.substr(0, dots));
      std::string rest = part.substr(dots + 2);
      int step = 1;
      if (auto colon = rest.find(':'); colon != std::string::npos) {
        step = std::stoi(rest.substr(colon + 1));
        rest = rest.substr(0, colon);
      }
      int hi = std::stoi(rest);
      if (step <= 0 || hi < lo) throw std::invalid_argument(part);
      for (int h = lo; h <= hi; h += step) out.push_back(h);
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--weights", "cannot parse '" + part + "'");
    }
  }
  for (int h : out)
    if (h < 0 || h > 400) throw CLI::ValidationError("--weights", "weights must lie in 0..400");
  return out;
}

ExpandedForm load_named_or_file(const std::string& arg, const Globals& g) {
  if (fs::is_regular_file(arg)) return load_form(arg);
  return cached_form(arg, g.cache());
}

// ---------------------------------------------------------------- commands

int cmd_expand(const Globals& g, const std::string& name, const std::string& out_path, std::ostream& out) {
  Report r("expand", g);
  const SeedRecipe& recipe = find_recipe(name);
  ExpandedForm f = expand_named(recipe.name);
  if (!out_path.empty()) save_form(f, out_path);
  bool ok = f.terms.size() == recipe.expected_terms;
  r.check(recipe.name, ok,
          {{"weight", f.weight}, {"terms", f.terms.size()}, {"expected", recipe.expected_terms},
           {"content", f.content()}, {"out", out_path}},
          "weight " + std::to_string(f.weight) + ", " + std::to_string(f.terms.size()) + " terms (expected " +
              std::to_string(recipe.expected_terms) + "), content " + std::to_string(f.content()));
  return r.finish(out);
}

int cmd_eval(const Globals& g, const std::string& form_arg, const std::string& tau_file, int count,
             std::ostream& out) {
  Report r("eval", g);
  const mp::Bits prec = g.bits(128);
  ExpandedForm f = load_named_or_file(form_arg, g);
  std::vector<SiegelPoint> taus;
  if (!tau_file.empty()) {
    taus = read_tau_file(tau_file, prec);
  } else {
    TauSampler sampler(g.tau_seed);
    for (int k = 0; k < count; ++k) taus.push_back(sampler.next(prec));
  }
  const int digits = static_cast<int>(prec * 0.30103) - 2;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    mp::Complex v = eval_form(f, taus[k], prec);
    r.info({{"index", k}, {"form", f.name}, {"re", v.re.to_string(digits)}, {"im", v.im.to_string(digits)}},
           f.name + "(tau_" + std::to_string(k) + ") = " + complex_string(v, digits));
  }
  return r.finish(out);
}

RingOptions ring_options(const Globals& g, int oversample) {
  RingOptions o;
  o.prec = g.bits(192);
  o.seed = g.tau_seed;
  o.oversample = oversample;
  o.cache_dir = g.cache();
  return o;
}

int cmd_rank(const Globals& g, const std::vector<int>& weights, int oversample, bool relations,
             std::ostream& out) {
  Report r("rank", g);
  GeneratorSystem gens(g.cache());
  RingLab lab(gens, ring_options(g, oversample));
  for (int h : weights) {
    auto rep = lab.verify_generation(h);
    r.check("rank/" + std::to_string(h), rep.pass,
            {{"weight", h}, {"monomials", rep.monomials}, {"samples", rep.samples}, {"rank", rep.rank},
             {"expected", rep.expected}, {"gap_log2", rep.gap_log2}},
            std::to_string(rep.monomials) + " monomials, rank " + std::to_string(rep.rank) + ", expected " +
                std::to_string(rep.expected) + ", gap " + gap_text(rep.gap_log2));
    if (relations) {
      auto rc = lab.relation_count(h);
      r.info({{"weight", h}, {"kernel", rc.kernel_dim}, {"inherited", rc.inherited}, {"new", rc.new_relations}},
             "     relations at " + std::to_string(h) + ": kernel " + std::to_string(rc.kernel_dim) +
                 ", inherited " + std::to_string(rc.inherited) + ", new " + std::to_string(rc.new_relations));
    }
  }
  return r.finish(out);
}

int cmd_hilbert(const Globals& g, const std::vector<int>& weights, std::ostream& out) {
  Report r("hilbert", g);
  for (int h : weights) {
    auto d = hilbert_dim(h);
    r.info({{"weight", h}, {"dim", d}}, std::to_string(h) + " " + std::to_string(d));
  }
  return r.finish(out);
}

int cmd_verify_counts(const Globals& g, std::ostream& out) {
  Report r("verify counts", g);
  for (const auto& recipe : seed_recipes()) {
    try {
      ExpandedForm f = expand_named(recipe.name);
      bool ok = f.terms.size() == recipe.expected_terms;
      r.check(recipe.name, ok, {{"terms", f.terms.size()}, {"expected", recipe.expected_terms}},
              std::to_string(f.terms.size()) + " (expected " + std::to_string(recipe.expected_terms) + ")");
    } catch (const Error& e) {
      r.fail(recipe.name, e);
    }
  }
  return r.finish(out);
}

int cmd_verify_relations(const Globals& g, std::vector<std::string> files, int samples, std::ostream& out) {
  Report r("verify relations", g);
  if (files.empty())
    for (const char* f : {"relations/weight32.rel", "relations/weight34.rel"})
      files.push_back((fs::path(SIEGEL3_DATA_DIR) / f).string());
  GeneratorSystem gens(g.cache());
  RingLab lab(gens, ring_options(g, 2));
  const double bound_log2 = -(static_cast<double>(lab.options().prec) / 2);
  for (const auto& file : files) {
    auto rels = load_relations(file);
    for (std::size_t k = 0; k < rels.size(); ++k) {
      std::string key = fs::path(file).filename().string() + "#" + std::to_string(k + 1);
      double res = lab.verify_relation(rels[k], samples).to_double();
      double l2 = res > 0 ? std::log2(res) : -1e9;
      r.check(key, l2 < bound_log2, {{"weight", rels[k].weight}, {"residual", res}, {"samples", samples}},
              "weight " + std::to_string(rels[k].weight) + ", residual " + sci(res) + " over " +
                  std::to_string(samples) + " samples");
    }
  }
  return r.finish(out);
}

int cmd_verify_generation(const Globals& g, const std::vector<int>& weights, std::ostream& out) {
  return cmd_rank(g, weights, 2, false, out);
}

int cmd_verify_dictionary(const Globals& g, std::ostream& out) {
  Report r("verify dictionary", g);
  if (g.fixtures.empty()) throw CLI::RequiredError("--fixtures");
  const mp::Bits prec = g.bits(256);
  auto fixtures = read_fixture_dir(g.fixtures, prec);
  if (fixtures.empty()) throw ValidationError("no *.json fixtures under " + g.fixtures);
  for (const auto& fx : fixtures) {
    const std::string tag = fx.label + "/";
    std::optional<Phi3Evaluator> ev;
    try {
      ev.emplace(fx, prec, g.cache());
    } catch (const Error& e) {
      r.fail(tag + "load", e);
      continue;
    }
    // Fixtures whose basis convention fails the Klein formula are rejected.
    double klein = 1;
    try {
      klein = dictionary_check(*ev, "chi18");
    } catch (const Error& e) {
      r.fail(tag + "chi18", e);
      continue;
    }
    r.check(tag + "chi18", klein < kDictionaryTolerance, {{"residual", klein}}, "Klein gate, residual " + sci(klein));
    if (klein >= kDictionaryTolerance) continue;
    for (const auto& name : printed_pf_names()) {
      if (name == "chi18") continue;
      try {
        double res = dictionary_check(*ev, name);
        r.check(tag + name, res < kDictionaryTolerance, {{"residual", res}}, "residual " + sci(res));
      } catch (const Error& e) {
        r.fail(tag + name, e);
      }
    }
    for (const auto& name : printed_pI_names()) {
      try {
        double res = inverse_dictionary_check(*ev, name);
        r.check(tag + "inverse/" + name, res < kDictionaryTolerance, {{"residual", res}}, "residual " + sci(res));
      } catch (const Error& e) {
        r.fail(tag + "inverse/" + name, e);
      }
    }
  }
  return r.finish(out);
}

int cmd_invariants(const Globals& g, const std::string& file, bool normalize, std::ostream& out) {
  Report r("invariants", g);
  RationalQuartic q = read_quartic(file);
  auto inv = dixmier_ohno(q);
  const auto& names = invariant_names();
  const auto& degs = invariant_degrees();
  const mpq_class& i27 = inv[invariant_index("I27")];
  if (normalize && i27 == 0) throw ValidationError("I27 vanishes; the quartic is singular and cannot be normalized");
  for (std::size_t k = 0; k < names.size(); ++k) {
    mpq_class v = inv[k];
    std::string label = names[k];
    if (normalize) {
      // degree-0 quotient I^(27/g) / I27^(d/g), g = gcd(d, 27)
      const int d = degs[k];
      const int gg = std::gcd(d, 27);
      mpq_class num, den;
      mpz_pow_ui(num.get_num_mpz_t(), v.get_num_mpz_t(), 27 / gg);
      mpz_pow_ui(num.get_den_mpz_t(), v.get_den_mpz_t(), 27 / gg);
      mpz_pow_ui(den.get_num_mpz_t(), i27.get_num_mpz_t(), d / gg);
      mpz_pow_ui(den.get_den_mpz_t(), i27.get_den_mpz_t(), d / gg);
      num.canonicalize();
      den.canonicalize();
      v = num / den;
      label = names[k] + "^" + std::to_string(27 / gg) + "/I27^" + std::to_string(d / gg);
    }
    r.info({{"name", names[k]}, {"degree", degs[k]}, {"value", v.get_str()}, {"normalized", normalize}},
           label + " = " + v.get_str());
  }
  r.info({{"name", "D27"}, {"value", discriminant_d27(q).get_str()}}, "D27 = " + discriminant_d27(q).get_str());
  return r.finish(out);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Degree-3 Siegel modular forms and ternary quartic invariants"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable JSON report");
  app.add_option("--prec", g.prec, "Working precision in bits")->check(CLI::Range(32, 4096));
  app.add_option("--tau-seed", g.tau_seed, "Seed of the random tau sampler");
  app.add_option("--fixtures", g.fixtures, "Directory of period-matrix fixtures");
  app.add_option("--forms-cache", g.forms_cache, "Directory of cached expanded forms");

  std::string form_name, out_path, tau_file, quartic_file, weights_spec = "4..28:2";
  int count = 3, oversample = 2, samples = 20, weight = 0;
  bool relations = false, normalize = false;
  std::vector<std::string> rel_files;

  auto* expand = app.add_subcommand("expand", "Expand a seed monomial into its orbit sum");
  expand->add_option("--form", form_name, "Form name")->required();
  expand->add_option("--out", out_path, "Write the form file here");

  auto* eval = app.add_subcommand("eval", "Evaluate a form at tau");
  eval->add_option("--form", form_name, "Form file or name")->required();
  eval->add_option("--tau", tau_file, "JSON tau-sample file (default: random tau)");
  eval->add_option("--count", count, "Random tau count when --tau is absent")->check(CLI::Range(1, 1000));

  auto* rank = app.add_subcommand("rank", "Numeric rank of the weight-h evaluation matrix");
  rank->add_option("--weight", weight, "Even weight h")->required()->check(CLI::Range(0, 400));
  rank->add_option("--oversample", oversample, "Samples per monomial")->check(CLI::Range(1, 16));
  rank->add_flag("--relations", relations, "Also report kernel and new relations (h >= 32)");

  auto* hilbert = app.add_subcommand("hilbert", "Dimensions from the Hilbert series");
  hilbert->add_option("--weights", weights_spec, "List such as 0..48 or 4,6,8")->required();

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->require_subcommand(1);
  auto* v_counts = verify->add_subcommand("counts", "Summand counts of all 34 seed recipes");
  auto* v_rel = verify->add_subcommand("relations", "Relations vanish at random tau");
  v_rel->add_option("--file", rel_files, "Relation files (default: the stored ones)");
  v_rel->add_option("--samples", samples, "Random tau count")->check(CLI::Range(1, 1000));
  auto* v_gen = verify->add_subcommand("generation", "Ranks equal Hilbert dimensions");
  v_gen->add_option("--weights", weights_spec, "Weights (default 4..28:2)");
  auto* v_dict = verify->add_subcommand("dictionary", "Klein formula and dictionary checks on fixtures");

  auto* inv = app.add_subcommand("invariants", "Dixmier-Ohno invariants of a quartic");
  inv->add_option("--quartic", quartic_file, "Quartic JSON file")->required()->check(CLI::ExistingFile);
  inv->add_flag("--normalize", normalize, "Divide by the matching power of I27");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return kExitUsage;
  }

  try {
    if (*expand) return cmd_expand(g, form_name, out_path, out);
    if (*eval) return cmd_eval(g, form_name, tau_file, count, out);
    if (*rank) return cmd_rank(g, {weight}, oversample, relations, out);
    if (*hilbert) return cmd_hilbert(g, parse_weights(weights_spec), out);
    if (*inv) return cmd_invariants(g, quartic_file, normalize, out);
    if (*v_counts) return cmd_verify_counts(g, out);
    if (*v_rel) return cmd_verify_relations(g, rel_files, samples, out);
    if (*v_gen) return cmd_verify_generation(g, parse_weights(weights_spec), out);
    if (*v_dict) return cmd_verify_dictionary(g, out);
  } catch (const CLI::Error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    if (g.json)
      out << json{{"pass", false}, {"error", e.kind()}, {"message", e.what()}}.dump(1) << '\n';
    else
      err << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}

}  // namespace siegel3
