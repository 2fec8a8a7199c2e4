// The ring of degree-3 Siegel modular forms as seen through its 19
// generators: weighted monomials, evaluation matrices over random tau, rank
// and kernel computations, and checks of polynomial identities between forms.
#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "siegel3/forms.hpp"
#include "siegel3/hilbert.hpp"
#include "siegel3/linalg.hpp"
#include "siegel3/symplectic.hpp"
#include "siegel3/theta.hpp"

namespace siegel3 {

inline constexpr int kGeneratorCount = 19;
using GenExponents = std::array<std::uint8_t, kGeneratorCount>;

/// Canonical generator names (primes spelled with a trailing `p`).
const std::array<std::string, kGeneratorCount>& generator_names();
const std::array<int, kGeneratorCount>& generator_weights();
/// Accepts `alpha12'` and `alpha12p` alike.  Throws UnknownForm.
int generator_index(std::string_view name);
int monomial_weight(const GenExponents& e);
std::string monomial_to_string(const GenExponents& e);

/// Every monomial of total weight h, in lexicographically decreasing order of
/// exponent vectors (so alpha4^k comes first).
std::vector<GenExponents> weighted_monomials(int h);

struct RelationTerm {
  mpz_class coeff;
  GenExponents exps{};
};

/// A weight-homogeneous integer polynomial in the generators.
struct RelationPoly {
  int weight = 0;
  std::vector<RelationTerm> terms;
  std::string to_string() const;
};

/// `poly := term (('+'|'-') term)*`, `term := integer ('*' name ('^' e)?)*`.
/// A term may also start with a name (coefficient 1).  Throws ParseError, or
/// ValidationError for a polynomial that is not weight-homogeneous.
RelationPoly parse_relation(std::string_view text, const std::string& source = "<memory>", int line = 1);
/// One relation per non-empty line; `#` starts a comment.
std::vector<RelationPoly> load_relations(const std::filesystem::path& path);

/// `target multiplier = poly`, meaning multiplier * target == poly.  The
/// multiplier is a product of integers or prime powers `p^e`.
struct PrintedIdentity {
  std::string target;
  mpz_class multiplier;
  RelationPoly rhs;
};
std::vector<PrintedIdentity> load_identities(const std::filesystem::path& path);
PrintedIdentity parse_identity(std::string_view text, const std::string& source = "<memory>", int line = 1);

/// The 19 generators as expanded forms.
class GeneratorSystem {
 public:
  /// Expands (or loads from `cache_dir`) every generator.
  explicit GeneratorSystem(const std::optional<std::filesystem::path>& cache_dir = std::nullopt);
  const ExpandedForm& form(int i) const { return forms_[i]; }
  const std::vector<ExpandedForm>& forms() const { return forms_; }

 private:
  std::vector<ExpandedForm> forms_;
};

/// Random tau with the theta ratios theta_c / theta_0 and the normalized
/// generator values g / theta_0^(2 w) cached.  Grows on demand; the k-th
/// sample depends only on the seed.
class SamplePool {
 public:
  struct Sample {
    std::array<mp::Complex, 36> ratios;
    std::array<mp::Complex, kGeneratorCount> gens;
    /// powers[g][e] = gens[g]^e for e < kPowerCap.
    std::vector<std::vector<mp::Complex>> powers;
  };
  static constexpr int kPowerCap = 16;

  /// With `cache_dir`, samples are read from and appended to
  /// `<cache_dir>/pool-<seed>-<prec>.json`.
  SamplePool(const GeneratorSystem& gens, std::uint64_t seed, mp::Bits prec, ThetaOptions theta = {},
             std::optional<std::filesystem::path> cache_dir = std::nullopt);

  /// Throws SampleDegenerate when theta_0 is numerically zero at a sample.
  void ensure(std::size_t n);
  std::size_t size() const { return samples_.size(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  mp::Bits precision() const { return prec_; }

  mp::Complex monomial(std::size_t i, const GenExponents& e) const;
  /// Any form, normalized by theta_0^(2 weight).
  mp::Complex form_value(std::size_t i, const ExpandedForm& f) const;

 private:
  const GeneratorSystem& gens_;
  TauSampler sampler_;
  std::uint64_t sampler_seed_;
  mp::Bits prec_;
  ThetaOptions theta_;
  std::optional<std::filesystem::path> cache_file_;
  std::vector<Sample> samples_;
  void finish_sample(Sample& s);
  void load_cache();
  void save_cache() const;
};

/// Rows are the monomials of weight h, columns the first n samples.
CMatrix evaluation_matrix(int h, SamplePool& pool, std::size_t n);
CMatrix evaluation_matrix(const std::vector<GenExponents>& monomials, SamplePool& pool, std::size_t n);

struct RingOptions {
  mp::Bits prec = 192;
  std::uint64_t seed = 20250101;
  int oversample = 2;
  ThetaOptions theta{};
  std::optional<std::filesystem::path> cache_dir;
};

struct GenerationReport {
  int weight = 0;
  std::size_t monomials = 0, samples = 0, rank = 0;
  std::int64_t expected = 0;
  double gap_log2 = 0;
  bool pass = false;
};

struct RelationCountReport {
  int weight = 0;
  std::size_t monomials = 0, samples = 0, rank = 0, kernel_dim = 0;
  /// Dimension of (lower-weight relations) x (generators) inside the kernel.
  std::size_t inherited = 0;
  std::size_t new_relations = 0;
};

struct SolveReport {
  std::vector<GenExponents> monomials;
  std::vector<mpq_class> coefficients;
  /// Relative residual of the reconstructed identity at fresh samples.
  double residual_log2 = 0;
};

class RingLab {
 public:
  RingLab(const GeneratorSystem& gens, RingOptions opt = {});

  SamplePool& pool() { return pool_; }
  const RingOptions& options() const { return opt_; }

  GenerationReport verify_generation(int h);
  /// Kernel of the weight-h evaluation map, minus what lower relations times
  /// generators already account for.  Computes lower weights from 32 up.
  RelationCountReport relation_count(int h);

  /// Max over samples of |sum| / max |term|; 0 for the zero polynomial.
  mp::Real verify_relation(const RelationPoly& rel, std::size_t n_samples);
  /// |multiplier * target * scale - rhs| / max term, max over samples.
  mp::Real identity_residual(const PrintedIdentity& id, const ExpandedForm& target, std::size_t n_samples,
                             const mpq_class& scale = 1);

  /// Throws NotInSpan, ReconstructionFailed, IllConditioned.
  SolveReport solve_expression(const ExpandedForm& target, const mpz_class& max_denominator = mpz_class(1) << 40);

 private:
  struct Kernel {
    std::vector<GenExponents> monomials;
    CMatrix basis;  // monomial coordinates, one column per relation
    std::size_t rank = 0, samples = 0;
    double gap_log2 = 0;
  };
  const Kernel& kernel(int h);
  std::size_t sample_count(std::size_t monomials) const;

  const GeneratorSystem& gens_;
  RingOptions opt_;
  SamplePool pool_;
  std::map<int, Kernel> kernels_;
};

}  // namespace siegel3
