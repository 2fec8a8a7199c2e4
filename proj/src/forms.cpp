#include "siegel3/forms.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "siegel3/error.hpp"

namespace siegel3 {

int even_slot(int index) {
  static const std::array<int, 64> slots = [] {
    std::array<int, 64> s{};
    s.fill(-1);
    const auto& ev = even_indices();
    for (int k = 0; k < 36; ++k) s[ev[k]] = k;
    return s;
  }();
  if (index < 0 || index >= 64) return -1;
  return slots[index];
}

int ThetaMonomial::exponent(int index) const {
  int s = even_slot(index);
  return s < 0 ? 0 : exps[s];
}

int ThetaMonomial::degree() const {
  int d = 0;
  for (auto e : exps) d += e;
  return d;
}

std::string to_string(const ThetaMonomial& m, bool tsuyumine) {
  std::string out = m.sign < 0 ? "-" : "+";
  const auto& ev = even_indices();
  for (int k = 0; k < 36; ++k) {
    if (m.exps[k] == 0) continue;
    out += ' ';
    if (tsuyumine) out += "t" + std::to_string(binary_to_tsuyumine(Characteristic(ev[k])));
    else out += std::to_string(ev[k]);
    out += ':' + std::to_string(m.exps[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table data

namespace {

struct SyzRow {
  int number;
  int sign;
  std::array<int, 8> thetas;
};

const std::vector<SyzRow>& syz_rows() {
  static const std::vector<SyzRow> rows = {
      {1, +1, {3, 28, 31, 33, 34, 61, 62, 0}},    {2, -1, {1, 2, 28, 31, 32, 35, 61, 62}},
      {3, -1, {3, 8, 20, 31, 33, 42, 54, 61}},    {4, +1, {1, 10, 20, 31, 35, 40, 54, 61}},
      {5, +1, {2, 8, 21, 31, 32, 42, 55, 61}},    {18, -1, {1, 4, 17, 20, 40, 45, 56, 61}},
      {31, +1, {3, 4, 7, 24, 27, 28, 31, 0}},     {32, -1, {1, 2, 5, 6, 24, 27, 28, 31}},
      {34, +1, {1, 5, 10, 14, 16, 20, 27, 31}},   {36, -1, {4, 10, 14, 17, 21, 27, 31, 0}},
      {37, -1, {4, 7, 28, 31, 32, 35, 56, 59}},   {38, +1, {5, 6, 28, 31, 33, 34, 56, 59}},
      {39, -1, {7, 8, 16, 31, 32, 47, 55, 56}},   {43, +1, {7, 12, 20, 31, 35, 40, 48, 59}},
      {45, +1, {7, 24, 31, 40, 47, 48, 55, 0}},   {47, -1, {14, 17, 31, 33, 47, 48, 62, 0}},
      {51, -1, {1, 6, 24, 31, 40, 47, 49, 54}},   {54, -1, {3, 12, 16, 31, 34, 45, 49, 62}},
      {55, +1, {3, 24, 27, 32, 35, 56, 59, 0}},   {73, +1, {8, 16, 24, 32, 40, 48, 56, 0}},
      {85, +1, {1, 16, 17, 32, 33, 48, 49, 0}},   {89, -1, {2, 3, 4, 5, 48, 49, 54, 55}},
      {90, +1, {1, 6, 7, 48, 49, 54, 55, 0}},     {99, -1, {5, 8, 17, 28, 34, 47, 54, 59}},
      {103, +1, {4, 8, 12, 16, 20, 24, 28, 0}},   {111, +1, {1, 4, 5, 16, 17, 20, 21, 0}},
      {115, -1, {8, 20, 28, 34, 42, 54, 62, 0}},  {118, -1, {3, 10, 21, 28, 33, 40, 55, 62}},
      {119, -1, {1, 20, 21, 34, 35, 54, 55, 0}},  {131, +1, {1, 2, 3, 4, 5, 6, 7, 0}},
      {132, -1, {4, 5, 6, 7, 32, 33, 34, 35}},    {133, +1, {2, 8, 10, 32, 34, 40, 42, 0}},
      {135, +1, {1, 2, 3, 32, 33, 34, 35, 0}},
  };
  return rows;
}

}  // namespace

const std::vector<int>& syzygetic_indices() {
  static const std::vector<int> idx = [] {
    std::vector<int> v;
    for (const auto& r : syz_rows()) v.push_back(r.number);
    return v;
  }();
  return idx;
}

ThetaMonomial syzygetic_monomial(int i) {
  for (const auto& r : syz_rows()) {
    if (r.number != i) continue;
    ThetaMonomial m;
    m.sign = r.sign;
    for (int t : r.thetas) m.exps[even_slot(t)] += 1;
    return m;
  }
  throw UnknownSyzygeticIndex("((" + std::to_string(i) + ")) is not tabulated");
}

const std::vector<SeedRecipe>& seed_recipes() {
  static const std::vector<SeedRecipe> rows = {
      {"alpha4", 4, "g131.132^2", 945},
      {"alpha6", 6, "t0^4 s131", 1080},
      {"alpha10", 10, "t16^2 t20^2 t32^2 t34^2 t48^2 t54^2 s131", 30240},
      {"alpha12", 12, "t2^4 t21^4 t24^4 t49^4 t62^4 t0^4", 336},
      {"alpha12p", 12, "s85^2 s119^2 / t1^4 t0^4", 945},
      {"beta14", 14, "t31^8 chi18 / s5 s54", 4320},
      {"alpha16", 16, "s85^2 s119 s131", 3780},
      {"beta16", 16, "s31 s43 s47 s51", 7560},
      {"chi18", 18, "chi18", 1},
      {"alpha18", 18, "t0^4 s85^2 s119 s131", 7560},
      {"alpha20", 20, "s85^2 s119^2 s131^2 / t1^4 t0^4", 63},
      {"gamma20", 20, "t31^4 chi18 s135 / s1", 7560},
      {"beta22", 22, "t27^4 t31^4 t54^4 t55^4 t59^4 t62^4 chi18 / s2 s54", 30240},
      {"beta22p", 22, "chi18 s119^2 s133^2 / t34^4 t0^4 s18 s34", 90720},
      {"alpha24", 24, "t0^4 s85^2 s119^2 s131^2 / t1^4", 1260},
      {"gamma24", 24, "t31^8 chi18^2 / s4 s5 s47 s54", 11340},
      {"gamma26", 26, "t31^4 t28^4 chi18 s38 s135 / s1", 22680},
      {"chi28", 28, "chi18^2 / s131^2", 135},
      {"alpha30", 30, "s85^3 s119^3 s131^3 / t1^4 t0^8", 1260},
      {"beta26", 26, "s32 s36 s37 s45 s90 s111 s135 / t0^4", 362880},
      {"beta28", 28, "s32 s36 s37 s45 s90 s111 s135", 362880},
      {"delta30", 30, "t28^4 t31^4 chi18 s47 s115 s118 / s1", 90720},
      {"beta32", 32, "chi18 s85^2 s89^2 s90 s111 s135 / t48^4 t49^4 t0^4 s4 s99", 362880},
      {"gamma32", 32, "t16^4 t20^4 t31^4 t49^4 t54^4 t56^4 t59^4 chi18 s135 / s1", 120960},
      {"c32p", 32, "t33^4 chi18 s90^2 s111^2 s135 / t1^4 t0^4 s1", 30240},
      {"beta34", 34, "t31^8 chi18 s90^2 s111^2 s135^2 / t0^4 t1^4 s3 s31", 120960},
      {"gamma36", 36, "t28^4 t31^4 chi18 s38 s90 s111 s135^2 / t1^4 s1", 181440},
      {"delta36", 36, "t28^4 t31^4 t0^4 chi18 s31 s38 s118 s135 / s1", 181440},
      {"gamma38", 38, "t31^16 chi18^2 s31 s39 s43 / t7^4 s4 s5 s47 s54", 90720},
      {"c38p", 38, "t31^4 chi18 s38^2 s90 s111 s135^2 / t1^4 s1", 362880},
      {"gamma42", 42, "chi18 s38 s85^2 s90 s111 s119^2 s135 / t1^4 t0^4 s1", 181440},
      {"gamma44", 44, "chi18^2 t31^8 s45^2 s55^2 s103^2 / t24^4 t0^4 s4 s5 s47 s54", 90720},
      {"delta46", 46, "t28^4 t31^4 chi18 s31 s38 s90 s111 s118 s135^2 / s1", 725760},
      {"c48", 48, "t28^4 chi18 s31^2 s38 s90 s111 s118 s135^2 / s1", 725760},
  };
  return rows;
}

const SeedRecipe& find_recipe(std::string_view name) {
  static const std::map<std::string, std::string, std::less<>> aliases = {
      {"alpha12'", "alpha12p"}, {"beta22'", "beta22p"}, {"c32'", "c32p"},
      {"gamma32'", "c32p"},     {"gamma32p", "c32p"},   {"c38'", "c38p"}};
  std::string key(name);
  if (auto it = aliases.find(key); it != aliases.end()) key = it->second;
  for (const auto& r : seed_recipes())
    if (r.name == key) return r;
  throw UnknownForm("no seed recipe named '" + std::string(name) + "'");
}

ThetaMonomial reduce_recipe(std::string_view recipe) {
  std::array<int, 36> acc{};
  int sign = 1;
  int side = 1;
  std::istringstream in{std::string(recipe)};
  std::string tok;
  auto bad = [&](const std::string& why) { return ParseError("recipe '" + std::string(recipe) + "': " + why); };
  while (in >> tok) {
    if (tok == "/") {
      side = -1;
      continue;
    }
    int power = 1;
    if (auto caret = tok.find('^'); caret != std::string::npos) {
      power = std::stoi(tok.substr(caret + 1));
      tok.resize(caret);
    }
    int k = side * power;
    if (tok == "chi18") {
      for (auto& a : acc) a += k;
    } else if (tok[0] == 't') {
      int s = even_slot(std::stoi(tok.substr(1)));
      if (s < 0) throw bad("odd theta " + tok);
      acc[s] += k;
    } else if (tok[0] == 's') {
      ThetaMonomial m = syzygetic_monomial(std::stoi(tok.substr(1)));
      for (int j = 0; j < 36; ++j) acc[j] += k * m.exps[j];
      if (m.sign < 0 && power % 2) sign = -sign;
    } else if (tok[0] == 'g') {
      auto dot = tok.find('.');
      if (dot == std::string::npos) throw bad("gcd needs two indices");
      ThetaMonomial a = syzygetic_monomial(std::stoi(tok.substr(1, dot - 1)));
      ThetaMonomial b = syzygetic_monomial(std::stoi(tok.substr(dot + 1)));
      for (int j = 0; j < 36; ++j) acc[j] += k * std::min(a.exps[j], b.exps[j]);
    } else {
      throw bad("unknown factor " + tok);
    }
  }
  ThetaMonomial out;
  out.sign = sign;
  for (int j = 0; j < 36; ++j) {
    if (acc[j] < 0)
      throw NegativeExponent("recipe '" + std::string(recipe) + "' leaves theta_" +
                             std::to_string(even_indices()[j]) + "^" + std::to_string(acc[j]));
    if (acc[j] > 255) throw bad("exponent overflow");
    out.exps[j] = static_cast<std::uint8_t>(acc[j]);
  }
  return out;
}

ThetaMonomial build_seed(std::string_view name) { return reduce_recipe(find_recipe(name).recipe); }

// ---------------------------------------------------------------------------
// Transformation

namespace {

struct SlotAction {
  std::array<std::uint8_t, 36> target{};
  std::array<std::uint8_t, 36> odd_sign{};  // 1 when the Eq. (2) sign is -1
  std::array<std::uint8_t, 36> sigma8{};
  int zeta4 = 1;

  explicit SlotAction(const SymplecticMatrix& m) : zeta4(siegel3::zeta4(m)) {
    const auto& ev = even_indices();
    for (int k = 0; k < 36; ++k) {
      auto r = act_on_characteristic(m, Characteristic(ev[k]));
      target[k] = static_cast<std::uint8_t>(even_slot(r.target.index()));
      odd_sign[k] = r.eq2_sign < 0;
      sigma8[k] = static_cast<std::uint8_t>(((r.sigma % 8) + 8) % 8);
    }
  }

  // Returns the image exponents and the sign; throws NonRealPhase.
  int apply(const Exponents& in, Exponents& out) const {
    int degree = 0, flips = 0, s = 0;
    out.fill(0);
    for (int k = 0; k < 36; ++k) {
      int e = in[k];
      if (!e) continue;
      out[target[k]] = static_cast<std::uint8_t>(e);
      degree += e;
      flips += odd_sign[k] * e;
      s += sigma8[k] * e;
    }
    s %= 8;
    if (degree % 4 != 0 || (s != 0 && s != 4))
      throw NonRealPhase("phase exp(-i pi " + std::to_string(s) + "/4) on a degree " + std::to_string(degree) +
                         " monomial");
    int sign = (flips % 2) ? -1 : 1;
    if (s == 4) sign = -sign;
    if (zeta4 < 0 && (degree / 4) % 2) sign = -sign;
    return sign;
  }
};

struct ExpHash {
  std::size_t operator()(const Exponents& e) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto b : e) {
      h ^= b;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace

ThetaMonomial transform_monomial(const SymplecticMatrix& m, const ThetaMonomial& mono) {
  SlotAction act(m);
  ThetaMonomial out;
  out.sign = mono.sign * act.apply(mono.exps, out.exps);
  return out;
}

std::uint64_t ExpandedForm::content() const { return terms.empty() ? 0 : 1451520ULL / terms.size(); }

int ExpandedForm::max_exponent() const {
  int m = 0;
  for (const auto& t : terms)
    for (auto e : t.exps) m = std::max<int>(m, e);
  return m;
}

bool operator==(const ExpandedForm& a, const ExpandedForm& b) {
  if (a.name != b.name || a.weight != b.weight || a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i)
    if (a.terms[i].exps != b.terms[i].exps || a.terms[i].coeff != b.terms[i].coeff) return false;
  return true;
}

ExpandedForm expand(const ThetaMonomial& seed, std::string name, int weight, std::span<const SymplecticMatrix> gens) {
  std::vector<SymplecticMatrix> standard;
  if (gens.empty()) {
    standard = standard_generators();
    gens = standard;
  }
  std::vector<SlotAction> actions;
  for (const auto& g : gens) actions.emplace_back(g);

  std::unordered_map<Exponents, std::int8_t, ExpHash> seen;
  seen.reserve(1 << 16);
  seen.emplace(seed.exps, static_cast<std::int8_t>(seed.sign));
  std::vector<std::pair<Exponents, int>> frontier{{seed.exps, seed.sign}}, next;
  Exponents img;
  while (!frontier.empty()) {
    next.clear();
    for (const auto& [e, s] : frontier)
      for (const auto& act : actions) {
        int sign = s * act.apply(e, img);
        auto [it, fresh] = seen.emplace(img, static_cast<std::int8_t>(sign));
        if (fresh) next.emplace_back(img, sign);
        else if (it->second != sign)
          throw SignConflict(name + ": monomial " + to_string(ThetaMonomial{img, sign}) + " reached with both signs");
      }
    frontier.swap(next);
  }

  ExpandedForm f;
  f.name = std::move(name);
  f.weight = weight;
  f.terms.reserve(seen.size());
  for (const auto& [e, s] : seen) f.terms.push_back({e, s});
  std::sort(f.terms.begin(), f.terms.end(), [](const FormTerm& a, const FormTerm& b) { return a.exps < b.exps; });
  return f;
}

ExpandedForm expand_named(std::string_view name) {
  const SeedRecipe& r = find_recipe(name);
  ThetaMonomial seed = reduce_recipe(r.recipe);
  if (seed.degree() != 2 * r.weight)
    throw ValidationError(r.name + ": seed degree " + std::to_string(seed.degree()) + " != 2 * weight");
  return expand(seed, r.name, r.weight);
}

// ---------------------------------------------------------------------------
// Evaluation

mp::Complex eval_terms(const ExpandedForm& f, std::span<const mp::Complex, 36> values, mp::Bits prec) {
  const mp::Bits work = prec + 16 + static_cast<mp::Bits>(std::bit_width(f.terms.size()));
  const int emax = f.max_exponent();
  // pw[k][e] = values[k]^e
  std::vector<std::vector<mp::Complex>> pw(36);
  mp::fast::Scratch s(work);
  for (int k = 0; k < 36; ++k) {
    pw[k].reserve(emax + 1);
    pw[k].emplace_back(1.0, 0.0, work);
    if (emax >= 1) {
      mp::Complex v = values[k];
      v.set_precision(work);
      pw[k].push_back(std::move(v));
    }
    for (int e = 2; e <= emax; ++e) {
      mp::Complex z(work);
      mp::fast::mul(z, pw[k][e - 1], pw[k][1], s);
      pw[k].push_back(std::move(z));
    }
  }
  // prefix[k] = product over slots < k of the current term.
  std::vector<mp::Complex> prefix(37, mp::Complex(work));
  prefix[0] = mp::Complex(1.0, 0.0, work);
  mp::Complex acc(work);
  const Exponents* prev = nullptr;
  for (const auto& t : f.terms) {
    int start = 0;
    if (prev) {
      while (start < 36 && (*prev)[start] == t.exps[start]) ++start;
    }
    for (int k = start; k < 36; ++k) {
      if (t.exps[k] == 0) {
        mpfr_set(prefix[k + 1].re.raw(), prefix[k].re.raw(), MPFR_RNDN);
        mpfr_set(prefix[k + 1].im.raw(), prefix[k].im.raw(), MPFR_RNDN);
      } else {
        mp::fast::mul(prefix[k + 1], prefix[k], pw[k][t.exps[k]], s);
      }
    }
    if (t.coeff > 0) acc += prefix[36];
    else acc -= prefix[36];
    prev = &t.exps;
  }
  acc.set_precision(prec);
  return acc;
}

std::array<mp::Complex, 36> even_thetas(const SiegelPoint& tau, mp::Bits prec) {
  auto all = eval_theta_constants(tau, prec);
  std::array<mp::Complex, 36> out;
  const auto& ev = even_indices();
  for (int k = 0; k < 36; ++k) out[k] = std::move(all[ev[k]]);
  return out;
}

std::array<mp::Complex, 36> theta_ratios(std::span<const mp::Complex, 36> thetas, mp::Bits prec) {
  mp::Complex inv = mp::inverse(thetas[0]);
  std::array<mp::Complex, 36> out;
  for (int k = 0; k < 36; ++k) {
    out[k] = k == 0 ? mp::Complex(1.0, 0.0, prec) : thetas[k] * inv;
    out[k].set_precision(prec);
  }
  return out;
}

mp::Complex eval_form(const ExpandedForm& f, const SiegelPoint& tau, mp::Bits prec) {
  auto th = even_thetas(tau, prec + 16);
  return eval_terms(f, th, prec);
}

mp::Real modularity_residual(const ExpandedForm& f, const SymplecticMatrix& m, const SiegelPoint& tau,
                             mp::Bits prec) {
  SiegelPoint mt = act_on_tau(m, tau.with_precision(prec + 32));
  mp::Complex lhs = eval_form(f, mt, prec + 16);
  mp::Complex rhs = eval_form(f, tau.with_precision(prec + 32), prec + 16);
  mp::Complex factor = mp::pow(cocycle(m, tau.with_precision(prec + 32)), f.weight);
  mp::Real floor = mp::Real::pow2(-static_cast<long>(prec / 2), prec);
  mp::Real den = mp::max(mp::abs(rhs), floor);
  mp::Real r = mp::abs(lhs - factor * rhs) / den;
  r.set_precision(prec);
  return r;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string body_of(const ExpandedForm& f) {
  std::string body = "SIEGEL3FORM " + f.name + " " + std::to_string(f.weight) + " " + std::to_string(f.terms.size()) +
                     "\n";
  body.reserve(body.size() + f.terms.size() * 64);
  for (const auto& t : f.terms) {
    body += t.coeff > 0 ? '+' : '-';
    for (int k = 0; k < 36; ++k) {
      if (!t.exps[k]) continue;
      body += ' ';
      body += std::to_string(even_indices()[k]);
      body += ':';
      body += std::to_string(t.exps[k]);
    }
    body += '\n';
  }
  return body;
}

}  // namespace

std::string serialize_form(const ExpandedForm& f) {
  std::string body = body_of(f);
  return body + "SHA256 " + sha256_hex(body) + "\n";
}

void save_form(const ExpandedForm& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << serialize_form(f);
}

ExpandedForm parse_form(std::string_view text, const std::string& source) {
  auto fail = [&](std::size_t line, std::size_t col, const std::string& why) {
    return ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + why);
  };
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) throw fail(lines.size() + 1, text.size() - pos + 1, "missing final newline");
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty()) throw fail(1, 1, "empty file");

  ExpandedForm f;
  std::size_t nterms = 0;
  {
    std::istringstream hdr{std::string(lines[0])};
    std::string magic;
    if (!(hdr >> magic >> f.name >> f.weight >> nterms) || magic != "SIEGEL3FORM")
      throw fail(1, 1, "expected 'SIEGEL3FORM <name> <weight> <nterms>'");
  }
  if (lines.size() != nterms + 2) throw fail(lines.size() + 1, 1, "expected " + std::to_string(nterms) + " terms and a SHA256 line");

  f.terms.reserve(nterms);
  for (std::size_t i = 1; i <= nterms; ++i) {
    std::string_view ln = lines[i];
    if (ln.empty() || (ln[0] != '+' && ln[0] != '-')) throw fail(i + 1, 1, "term must start with + or -");
    FormTerm t;
    t.coeff = ln[0] == '+' ? 1 : -1;
    std::size_t p = 1;
    int last = -1;
    while (p < ln.size()) {
      if (ln[p] != ' ') throw fail(i + 1, p + 1, "expected a space");
      ++p;
      int idx = 0, e = 0;
      auto r1 = std::from_chars(ln.data() + p, ln.data() + ln.size(), idx);
      if (r1.ec != std::errc() || r1.ptr == ln.data() + ln.size() || *r1.ptr != ':')
        throw fail(i + 1, p + 1, "expected idx:exp");
      std::size_t col = p + 1;
      p = static_cast<std::size_t>(r1.ptr - ln.data()) + 1;
      auto r2 = std::from_chars(ln.data() + p, ln.data() + ln.size(), e);
      if (r2.ec != std::errc()) throw fail(i + 1, p + 1, "expected exponent");
      p = static_cast<std::size_t>(r2.ptr - ln.data());
      int slot = even_slot(idx);
      if (slot < 0) throw ValidationError(source + ":" + std::to_string(i + 1) + ":" + std::to_string(col) + ": theta_" + std::to_string(idx) + " is not even");
      if (idx <= last) throw ValidationError(source + ":" + std::to_string(i + 1) + ": indices not increasing");
      if (e <= 0 || e > 255) throw ValidationError(source + ":" + std::to_string(i + 1) + ": exponent out of range");
      last = idx;
      t.exps[slot] = static_cast<std::uint8_t>(e);
    }
    f.terms.push_back(t);
  }
  std::string_view tail = lines.back();
  if (tail.substr(0, 7) != "SHA256 ") throw fail(lines.size(), 1, "expected SHA256 line");
  std::size_t body_len = static_cast<std::size_t>(lines.back().data() - text.data());
  if (sha256_hex(text.substr(0, body_len)) != tail.substr(7)) throw ChecksumMismatch(source + ": body digest differs");

  for (std::size_t i = 1; i < f.terms.size(); ++i) {
    if (f.terms[i - 1].exps == f.terms[i].exps) throw ValidationError(source + ":" + std::to_string(i + 2) + ": duplicate monomial");
    if (!(f.terms[i - 1].exps < f.terms[i].exps)) throw ValidationError(source + ":" + std::to_string(i + 2) + ": terms not in canonical order");
  }
  return f;
}

ExpandedForm load_form(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_form(ss.str(), path.string());
}

ExpandedForm cached_form(std::string_view name, const std::optional<std::filesystem::path>& dir) {
  const SeedRecipe& r = find_recipe(name);
  if (!dir) return expand_named(r.name);
  std::filesystem::path p = *dir / (r.name + ".form");
  if (std::filesystem::exists(p)) return load_form(p);
  std::filesystem::create_directories(*dir);
  ExpandedForm f = expand_named(r.name);
  std::filesystem::path tmp = p;
  tmp += ".tmp";
  save_form(f, tmp);
  std::filesystem::rename(tmp, p);
  return f;
}

}  // namespace siegel3
