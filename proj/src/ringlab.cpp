#include "siegel3/ringlab.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "siegel3/error.hpp"

namespace siegel3 {

const std::array<std::string, kGeneratorCount>& generator_names() {
  static const auto names = [] {
    std::array<std::string, kGeneratorCount> n;
    const auto& recipes = seed_recipes();
    for (int i = 0; i < kGeneratorCount; ++i) n[i] = recipes[i].name;
    return n;
  }();
  return names;
}

const std::array<int, kGeneratorCount>& generator_weights() {
  static const std::array<int, kGeneratorCount> w = {4,  6,  10, 12, 12, 14, 16, 16, 18, 18,
                                                     20, 20, 22, 22, 24, 24, 26, 28, 30};
  return w;
}

int generator_index(std::string_view name) {
  std::string n(name);
  if (!n.empty() && n.back() == '\'') n.back() = 'p';
  const auto& names = generator_names();
  for (int i = 0; i < kGeneratorCount; ++i)
    if (names[i] == n) return i;
  throw UnknownForm("'" + std::string(name) + "' is not one of the 19 generators");
}

int monomial_weight(const GenExponents& e) {
  int w = 0;
  for (int i = 0; i < kGeneratorCount; ++i) w += e[i] * generator_weights()[i];
  return w;
}

std::string monomial_to_string(const GenExponents& e) {
  std::string out;
  for (int i = 0; i < kGeneratorCount; ++i) {
    if (!e[i]) continue;
    if (!out.empty()) out += '*';
    out += generator_names()[i];
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out.empty() ? "1" : out;
}

std::vector<GenExponents> weighted_monomials(int h) {
  std::vector<GenExponents> out;
  if (h < 0 || h % 2) return out;
  GenExponents cur{};
  const auto& w = generator_weights();
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    if (i == kGeneratorCount) return;
    for (int k = left / w[i]; k >= 0; --k) {
      cur[i] = static_cast<std::uint8_t>(k);
      rec(i + 1, left - k * w[i]);
    }
    cur[i] = 0;
  };
  rec(0, h);
  return out;
}

// ---------------------------------------------------------------- parsing

namespace {

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& source, int line) : s_(text), source_(source), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  mpz_class integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return mpz_class(std::string(s_.substr(start, pos_ - start)));
  }
  std::string name() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '\'')) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }
  std::size_t pos() const { return pos_; }
  [[noreturn]] void fail(const std::string& msg, std::size_t at = std::string::npos) const {
    if (at == std::string::npos) at = pos_;
    throw ParseError(source_ + ":" + std::to_string(line_) + ":" + std::to_string(at + 1) + ": " + msg);
  }

 private:
  std::string_view s_;
  const std::string& source_;
  int line_;
  std::size_t pos_ = 0;
};

RelationPoly parse_poly(Lexer& lx) {
  RelationPoly p;
  bool first = true;
  std::optional<int> weight;
  while (!lx.done()) {
    int sign = 1;
    if (lx.accept('+')) {
    } else if (lx.accept('-')) {
      sign = -1;
    } else if (!first) {
      lx.fail("expected '+' or '-'");
    }
    first = false;
    RelationTerm t;
    t.coeff = 1;
    std::size_t start = lx.pos();
    bool need_factor = true;
    if (std::isdigit(static_cast<unsigned char>(lx.peek()))) {
      t.coeff = lx.integer();
      need_factor = false;
    }
    while (need_factor || lx.accept('*')) {
      need_factor = false;
      std::size_t at = lx.pos();
      std::string n = lx.name();
      int g;
      try {
        g = generator_index(n);
      } catch (const UnknownForm&) {
        lx.fail("unknown generator '" + n + "'", at);
      }
      long e = 1;
      if (lx.accept('^')) {
        mpz_class z = lx.integer();
        if (z > 255 || z == 0) lx.fail("exponent out of range");
        e = z.get_si();
      }
      if (t.exps[g] + e > 255) lx.fail("exponent out of range");
      t.exps[g] = static_cast<std::uint8_t>(t.exps[g] + e);
    }
    t.coeff *= sign;
    int w = monomial_weight(t.exps);
    if (weight && *weight != w)
      throw ValidationError("term at column " + std::to_string(start + 1) + " has weight " + std::to_string(w) +
                            ", expected " + std::to_string(*weight));
    weight = w;
    if (t.coeff != 0) p.terms.push_back(std::move(t));
  }
  p.weight = weight.value_or(0);
  return p;
}

}  // namespace

std::string RelationPoly::to_string() const {
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& t : terms) {
    mpz_class a = abs(t.coeff);
    if (out.empty())
      out += t.coeff < 0 ? "-" : "";
    else
      out += t.coeff < 0 ? " - " : " + ";
    out += a.get_str();
    for (int i = 0; i < kGeneratorCount; ++i)
      if (t.exps[i]) {
        out += "*" + generator_names()[i];
        if (t.exps[i] > 1) out += "^" + std::to_string(t.exps[i]);
      }
  }
  return out;
}

RelationPoly parse_relation(std::string_view text, const std::string& source, int line) {
  Lexer lx(text, source, line);
  if (lx.peek() == '0') {
    // the zero polynomial, written "0"
    Lexer probe(text, source, line);
    if (probe.integer() == 0 && probe.done()) return {};
  }
  return parse_poly(lx);
}

PrintedIdentity parse_identity(std::string_view text, const std::string& source, int line) {
  auto eq = text.find('=');
  Lexer lx(text.substr(0, eq), source, line);
  if (eq == std::string_view::npos) lx.fail("missing '='", text.size());
  PrintedIdentity id;
  id.target = lx.name();
  id.multiplier = 1;
  do {
    mpz_class b = lx.integer();
    if (lx.accept('^')) {
      mpz_class e = lx.integer();
      mpz_pow_ui(b.get_mpz_t(), b.get_mpz_t(), e.get_ui());
    }
    id.multiplier *= b;
  } while (lx.accept('*'));
  if (!lx.done()) lx.fail("unexpected character");
  Lexer rhs(text.substr(eq + 1), source, line);
  id.rhs = parse_poly(rhs);
  return id;
}

namespace {

template <class T, class F>
std::vector<T> load_lines(const std::filesystem::path& path, F parse) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<T> out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse(line, path.string(), no));
  }
  return out;
}

}  // namespace

std::vector<RelationPoly> load_relations(const std::filesystem::path& path) {
  return load_lines<RelationPoly>(
      path, [](const std::string& l, const std::string& src, int no) { return parse_relation(l, src, no); });
}

std::vector<PrintedIdentity> load_identities(const std::filesystem::path& path) {
  return load_lines<PrintedIdentity>(
      path, [](const std::string& l, const std::string& src, int no) { return parse_identity(l, src, no); });
}

// ---------------------------------------------------------------- samples

GeneratorSystem::GeneratorSystem(const std::optional<std::filesystem::path>& cache_dir) {
  for (const auto& n : generator_names()) forms_.push_back(cached_form(n, cache_dir));
}

SamplePool::SamplePool(const GeneratorSystem& gens, std::uint64_t seed, mp::Bits prec, ThetaOptions theta,
                       std::optional<std::filesystem::path> cache_dir)
    : gens_(gens), sampler_(seed), sampler_seed_(seed), prec_(prec), theta_(theta) {
  if (cache_dir) {
    cache_file_ = *cache_dir / ("pool-" + std::to_string(seed) + "-" + std::to_string(prec) + ".json");
    load_cache();
  }
}

void SamplePool::finish_sample(Sample& s) {
  const mp::Bits work = prec_ + 32;
  s.powers.assign(kGeneratorCount, {});
  for (int g = 0; g < kGeneratorCount; ++g) {
    auto& pw = s.powers[g];
    pw.reserve(kPowerCap);
    pw.emplace_back(1.0, 0.0, work);
    for (int e = 1; e < kPowerCap; ++e) pw.push_back(pw.back() * s.gens[g]);
  }
}

void SamplePool::load_cache() {
  std::ifstream in(*cache_file_);
  if (!in) return;
  const mp::Bits work = prec_ + 32;
  try {
    auto j = nlohmann::json::parse(in);
    // The sampler must stay in step with the cached prefix.
    for (const auto& row : j.at("samples")) {
      Sample s;
      for (int k = 0; k < 36; ++k)
        s.ratios[k] = mp::Complex(mp::Real::parse(row.at(2 * k).get<std::string>(), work),
                                  mp::Real::parse(row.at(2 * k + 1).get<std::string>(), work));
      for (int g = 0; g < kGeneratorCount; ++g)
        s.gens[g] = mp::Complex(mp::Real::parse(row.at(72 + 2 * g).get<std::string>(), work),
                                mp::Real::parse(row.at(73 + 2 * g).get<std::string>(), work));
      finish_sample(s);
      sampler_.next(work);
      samples_.push_back(std::move(s));
    }
  } catch (const std::exception&) {
    // unreadable cache: start over
    samples_.clear();
    sampler_ = TauSampler(sampler_seed_);
  }
}

void SamplePool::save_cache() const {
  const int digits = static_cast<int>((prec_ + 32) * 0.30103) + 3;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : samples_) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& z : s.ratios) row.push_back(z.re.to_string(digits)), row.push_back(z.im.to_string(digits));
    for (const auto& z : s.gens) row.push_back(z.re.to_string(digits)), row.push_back(z.im.to_string(digits));
    rows.push_back(std::move(row));
  }
  std::filesystem::create_directories(cache_file_->parent_path());
  auto tmp = *cache_file_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << nlohmann::json{{"prec", prec_}, {"samples", rows}}.dump();
  }
  std::filesystem::rename(tmp, *cache_file_);
}

void SamplePool::ensure(std::size_t n) {
  const mp::Bits work = prec_ + 32;
  const std::size_t before = samples_.size();
  while (samples_.size() < n) {
    SiegelPoint tau = sampler_.next(work);
    auto all = eval_theta_constants(tau, work, theta_);
    std::array<mp::Complex, 36> even;
    mp::Real largest(work);
    for (int k = 0; k < 36; ++k) {
      even[k] = all[even_indices()[k]];
      largest = mp::max(largest, mp::abs(even[k]));
    }
    if (mp::abs(even[0]) <= largest * mp::Real::pow2(-static_cast<long>(prec_) / 4, work))
      throw SampleDegenerate("theta_0 vanishes numerically at sample " + std::to_string(samples_.size()));
    Sample s;
    s.ratios = theta_ratios(even, work);
    for (int g = 0; g < kGeneratorCount; ++g) s.gens[g] = eval_terms(gens_.form(g), s.ratios, work);
    finish_sample(s);
    samples_.push_back(std::move(s));
  }
  if (cache_file_ && samples_.size() > before) save_cache();
}

mp::Complex SamplePool::monomial(std::size_t i, const GenExponents& e) const {
  const Sample& s = samples_.at(i);
  mp::Complex acc(1.0, 0.0, prec_ + 32);
  for (int g = 0; g < kGeneratorCount; ++g) {
    if (!e[g]) continue;
    acc *= e[g] < kPowerCap ? s.powers[g][e[g]] : mp::pow(s.gens[g], e[g]);
  }
  return acc;
}

mp::Complex SamplePool::form_value(std::size_t i, const ExpandedForm& f) const {
  return eval_terms(f, samples_.at(i).ratios, prec_ + 32);
}

CMatrix evaluation_matrix(const std::vector<GenExponents>& monomials, SamplePool& pool, std::size_t n) {
  pool.ensure(n);
  CMatrix e(monomials.size(), n, pool.precision());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < monomials.size(); ++i) {
      e(i, j) = pool.monomial(j, monomials[i]);
      e(i, j).set_precision(pool.precision());
    }
  return e;
}

CMatrix evaluation_matrix(int h, SamplePool& pool, std::size_t n) {
  return evaluation_matrix(weighted_monomials(h), pool, n);
}

// ---------------------------------------------------------------- ring lab

namespace {

// Scales each row of A to unit max-modulus, then each column to unit norm.
// Returns the column factors d (A_scaled = R A diag(d)).
std::vector<mp::Real> equilibrate(CMatrix& a, mp::Bits prec) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    mp::Real m(prec);
    for (std::size_t j = 0; j < a.cols(); ++j) m = mp::max(m, mp::abs(a(i, j)));
    if (m.is_zero()) continue;
    mp::Real inv = mp::Real(1.0, prec) / m;
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) *= inv;
  }
  std::vector<mp::Real> d;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    mp::Real n(prec);
    for (std::size_t i = 0; i < a.rows(); ++i) n += mp::norm(a(i, j));
    mp::Real f = n.is_zero() ? mp::Real(1.0, prec) : mp::Real(1.0, prec) / mp::sqrt(n);
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) *= f;
    d.push_back(f);
  }
  return d;
}

}  // namespace

RingLab::RingLab(const GeneratorSystem& gens, RingOptions opt)
    : gens_(gens), opt_(opt), pool_(gens, opt.seed, opt.prec, opt.theta, opt.cache_dir) {}

std::size_t RingLab::sample_count(std::size_t monomials) const {
  return std::max<std::size_t>(static_cast<std::size_t>(opt_.oversample) * monomials, monomials + 4);
}

const RingLab::Kernel& RingLab::kernel(int h) {
  if (auto it = kernels_.find(h); it != kernels_.end()) return it->second;
  Kernel k;
  k.monomials = weighted_monomials(h);
  const std::size_t m = k.monomials.size();
  k.samples = sample_count(m);
  // samples x monomials: the kernel is the space of relations
  CMatrix a = evaluation_matrix(k.monomials, pool_, k.samples).transpose();
  auto d = equilibrate(a, opt_.prec);
  RankResult r = numeric_rank(a, opt_.prec);
  k.rank = r.rank;
  k.gap_log2 = r.gap_log2;
  k.basis = std::move(r.kernel);
  for (std::size_t c = 0; c < k.basis.cols(); ++c)
    for (std::size_t i = 0; i < m; ++i) k.basis(i, c) *= d[i];
  return kernels_.emplace(h, std::move(k)).first->second;
}

GenerationReport RingLab::verify_generation(int h) {
  if (h < 4 || h % 2) throw std::invalid_argument("verify_generation needs an even weight >= 4");
  const Kernel& k = kernel(h);
  GenerationReport rep;
  rep.weight = h;
  rep.monomials = k.monomials.size();
  rep.samples = k.samples;
  rep.rank = k.rank;
  rep.expected = hilbert_dim(h);
  rep.gap_log2 = k.gap_log2;
  rep.pass = static_cast<std::int64_t>(rep.rank) == rep.expected;
  return rep;
}

RelationCountReport RingLab::relation_count(int h) {
  if (h < 4 || h % 2) throw std::invalid_argument("relation_count needs an even weight");
  const Kernel& k = kernel(h);
  RelationCountReport rep;
  rep.weight = h;
  rep.monomials = k.monomials.size();
  rep.samples = k.samples;
  rep.rank = k.rank;
  rep.kernel_dim = k.basis.cols();

  std::map<GenExponents, std::size_t> index;
  for (std::size_t i = 0; i < k.monomials.size(); ++i) index[k.monomials[i]] = i;
  // Undo the column scaling of weight h so products are compared in the
  // same coordinates the kernel was computed in.
  std::vector<mp::Real> scale(k.monomials.size(), mp::Real(opt_.prec));
  for (std::size_t i = 0; i < k.monomials.size(); ++i) {
    // |monomial| over the samples used at weight h
    mp::Real n(opt_.prec);
    for (std::size_t j = 0; j < k.samples; ++j) n = mp::max(n, mp::abs(pool_.monomial(j, k.monomials[i])));
    scale[i] = n;
  }
  CMatrix products(k.monomials.size(), 0, opt_.prec);
  for (int lower = 4; lower < h; lower += 2) {
    int gw = h - lower;
    bool any_generator = false;
    for (int w : generator_weights()) any_generator |= w == gw;
    if (!any_generator) continue;
    if (weighted_monomials(lower).size() == static_cast<std::size_t>(hilbert_dim(lower))) continue;
    const Kernel& low = kernel(lower);
    for (int g = 0; g < kGeneratorCount; ++g) {
      if (generator_weights()[g] != gw) continue;
      for (std::size_t c = 0; c < low.basis.cols(); ++c) {
        CMatrix col(k.monomials.size(), 1, opt_.prec);
        for (std::size_t i = 0; i < low.monomials.size(); ++i) {
          GenExponents e = low.monomials[i];
          ++e[g];
          col(index.at(e), 0) = low.basis(i, c) * scale[index.at(e)];
        }
        products.append_column(col, 0);
      }
    }
  }
  if (products.cols()) {
    // unit columns
    for (std::size_t c = 0; c < products.cols(); ++c) {
      mp::Real n(opt_.prec);
      for (std::size_t i = 0; i < products.rows(); ++i) n += mp::norm(products(i, c));
      mp::Real f = mp::Real(1.0, opt_.prec) / mp::sqrt(n);
      for (std::size_t i = 0; i < products.rows(); ++i) products(i, c) *= f;
    }
    rep.inherited = numeric_rank(products, opt_.prec).rank;
  }
  rep.new_relations = rep.kernel_dim - std::min(rep.kernel_dim, rep.inherited);
  return rep;
}

mp::Real RingLab::verify_relation(const RelationPoly& rel, std::size_t n_samples) {
  mp::Real worst(opt_.prec);
  if (rel.terms.empty()) return worst;
  pool_.ensure(n_samples);
  const mp::Bits work = opt_.prec + 32;
  for (std::size_t j = 0; j < n_samples; ++j) {
    mp::Complex sum(work);
    mp::Real biggest(work);
    for (const auto& t : rel.terms) {
      mp::Real c(work);
      mpfr_set_z(c.raw(), t.coeff.get_mpz_t(), MPFR_RNDN);
      mp::Complex v = pool_.monomial(j, t.exps) * c;
      biggest = mp::max(biggest, mp::abs(v));
      sum += v;
    }
    worst = mp::max(worst, mp::abs(sum) / biggest);
  }
  return worst;
}

mp::Real RingLab::identity_residual(const PrintedIdentity& id, const ExpandedForm& target, std::size_t n_samples,
                                    const mpq_class& scale) {
  pool_.ensure(n_samples);
  const mp::Bits work = opt_.prec + 32;
  mp::Real mult(work), num(work), den(work);
  mpfr_set_z(mult.raw(), id.multiplier.get_mpz_t(), MPFR_RNDN);
  mpfr_set_z(num.raw(), scale.get_num_mpz_t(), MPFR_RNDN);
  mpfr_set_z(den.raw(), scale.get_den_mpz_t(), MPFR_RNDN);
  mult = mult * num / den;
  mp::Real worst(work);
  for (std::size_t j = 0; j < n_samples; ++j) {
    mp::Complex lhs = pool_.form_value(j, target) * mult;
    mp::Real biggest = mp::abs(lhs);
    mp::Complex sum = -lhs;
    for (const auto& t : id.rhs.terms) {
      mp::Real c(work);
      mpfr_set_z(c.raw(), t.coeff.get_mpz_t(), MPFR_RNDN);
      mp::Complex v = pool_.monomial(j, t.exps) * c;
      biggest = mp::max(biggest, mp::abs(v));
      sum += v;
    }
    worst = mp::max(worst, mp::abs(sum) / biggest);
  }
  return worst;
}

SolveReport RingLab::solve_expression(const ExpandedForm& target, const mpz_class& max_denominator) {
  const int h = target.weight;
  SolveReport rep;
  const Kernel& k = kernel(h);
  rep.monomials = k.monomials;
  const std::size_t m = k.monomials.size();
  if (k.rank < m)
    throw IllConditioned("weight " + std::to_string(h) + " carries relations; the expression is not unique");
  const std::size_t n = k.samples;
  const mp::Bits p = opt_.prec;
  CMatrix a = evaluation_matrix(k.monomials, pool_, n).transpose();
  std::vector<mp::Complex> b;
  for (std::size_t j = 0; j < n; ++j) {
    b.push_back(pool_.form_value(j, target));
    b.back().set_precision(p);
  }
  // row scaling shared with the right-hand side
  for (std::size_t j = 0; j < n; ++j) {
    mp::Real mx = mp::abs(b[j]);
    for (std::size_t i = 0; i < m; ++i) mx = mp::max(mx, mp::abs(a(j, i)));
    mp::Real inv = mp::Real(1.0, p) / mx;
    for (std::size_t i = 0; i < m; ++i) a(j, i) *= inv;
    b[j] *= inv;
  }
  std::vector<mp::Real> d;
  for (std::size_t i = 0; i < m; ++i) {
    mp::Real nn(p);
    for (std::size_t j = 0; j < n; ++j) nn += mp::norm(a(j, i));
    mp::Real f = mp::Real(1.0, p) / mp::sqrt(nn);
    for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
    d.push_back(f);
  }
  auto y = least_squares(a, b, p);
  // the target must lie in the span: residual at the fitting samples
  mp::Real res(p), bn(p);
  for (std::size_t j = 0; j < n; ++j) {
    mp::Complex s = -b[j];
    for (std::size_t i = 0; i < m; ++i) s += a(j, i) * y[i];
    res += mp::norm(s);
    bn += mp::norm(b[j]);
  }
  if (mp::sqrt(res / bn) > mp::Real::pow2(-static_cast<long>(p) / 3, p))
    throw NotInSpan(target.name + " is not a combination of weight-" + std::to_string(h) + " monomials (residual 2^" +
                    std::to_string(mp::log2(mp::sqrt(res / bn)).to_double()) + ")");
  const mp::Real tol = mp::Real::pow2(-static_cast<long>(p) / 3, p);
  for (std::size_t i = 0; i < m; ++i) {
    mp::Complex x = y[i] * d[i];
    mp::Real scale = mp::max(mp::Real(1.0, p), mp::abs(x));
    if (mp::abs(x.im) > tol * scale)
      throw ReconstructionFailed("coefficient of " + monomial_to_string(k.monomials[i]) + " is not real");
    auto q = rational_reconstruct(x.re, max_denominator, tol * scale);
    if (!q) throw ReconstructionFailed("no small rational near the coefficient of " + monomial_to_string(k.monomials[i]));
    rep.coefficients.push_back(*q);
  }
  // fresh samples
  const std::size_t fresh = 8;
  pool_.ensure(n + fresh);
  const mp::Bits work = p + 32;
  mp::Real worst(work);
  for (std::size_t j = n; j < n + fresh; ++j) {
    mp::Complex lhs = pool_.form_value(j, target);
    mp::Real biggest = mp::abs(lhs);
    mp::Complex sum = -lhs;
    for (std::size_t i = 0; i < m; ++i) {
      if (rep.coefficients[i] == 0) continue;
      mp::Real num(work), den(work);
      mpfr_set_z(num.raw(), rep.coefficients[i].get_num_mpz_t(), MPFR_RNDN);
      mpfr_set_z(den.raw(), rep.coefficients[i].get_den_mpz_t(), MPFR_RNDN);
      mp::Complex v = pool_.monomial(j, k.monomials[i]) * (num / den);
      biggest = mp::max(biggest, mp::abs(v));
      sum += v;
    }
    worst = mp::max(worst, mp::abs(sum) / biggest);
  }
  rep.residual_log2 = worst.is_zero() ? -std::numeric_limits<double>::infinity() : mp::log2(worst).to_double();
  if (worst > mp::Real::pow2(-static_cast<long>(p) / 2, work))
    throw ReconstructionFailed("reconstructed identity fails at fresh samples (residual 2^" +
                               std::to_string(rep.residual_log2) + ")");
  return rep;
}

}  // namespace siegel3
