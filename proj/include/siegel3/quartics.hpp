// Ternary quartics: Dixmier-Ohno invariants built from the classical
// concomitants, linear substitutions, and the stored dictionary polynomials
// between invariants and modular forms.
#pragma once

#include <gmpxx.h>

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "siegel3/mp.hpp"
#include "siegel3/ringlab.hpp"

namespace siegel3 {

/// Homogeneous form in three variables.  Coefficients are those of the
/// monomials x^i y^j z^k, listed with i descending, then j descending.
template <class T>
class TernaryForm {
 public:
  TernaryForm() = default;
  TernaryForm(int degree, const T& zero);

  int degree() const { return degree_; }
  std::size_t size() const { return c_.size(); }
  static std::size_t index(int degree, int i, int j);
  T& operator()(int i, int j, int k);
  const T& operator()(int i, int j, int k) const;
  T& at(std::size_t n) { return c_[n]; }
  const T& at(std::size_t n) const { return c_[n]; }
  /// Exponents of slot n.
  std::array<int, 3> exponents(std::size_t n) const;
  const T& zero() const { return zero_; }

 private:
  int degree_ = 0;
  T zero_{};
  std::vector<T> c_;
};

template <class T>
using TernaryQuartic = TernaryForm<T>;

using RationalQuartic = TernaryQuartic<mpq_class>;
using ComplexQuartic = TernaryQuartic<mp::Complex>;

RationalQuartic make_quartic(const std::vector<std::pair<std::array<int, 3>, mpq_class>>& terms);
/// `{"coeffs": {"400": "1", "310": "-2/3", ...}}`.
RationalQuartic read_quartic(const std::filesystem::path& path);
RationalQuartic quartic_from_json_text(const std::string& text);
std::string quartic_to_string(const RationalQuartic& q);
ComplexQuartic to_complex(const RationalQuartic& q, mp::Bits prec);

inline constexpr int kInvariantCount = 13;
/// I3 I6 I9 J9 I12 J12 I15 J15 I18 J18 I21 J21 I27.
const std::array<std::string, kInvariantCount>& invariant_names();
const std::array<int, kInvariantCount>& invariant_degrees();
/// Throws UnknownForm.
int invariant_index(std::string_view name);

template <class T>
struct DixmierOhnoVector {
  std::array<T, kInvariantCount> v;
  const T& operator[](int i) const { return v[i]; }
  T& operator[](int i) { return v[i]; }
  const T& get(std::string_view name) const { return v[invariant_index(name)]; }
};

/// The 13 invariants; exact over the rationals.
DixmierOhnoVector<mpq_class> dixmier_ohno(const RationalQuartic& q);
/// Same construction in floating point.
DixmierOhnoVector<mp::Complex> dixmier_ohno(const ComplexQuartic& q);

/// Normalized discriminant 4^-7 Res(dQ/dx, dQ/dy, dQ/dz); equals 2^40 I27.
mpq_class discriminant_d27(const RationalQuartic& q);

using RationalMat3 = std::array<std::array<mpq_class, 3>, 3>;
/// Q(g x).  Throws SingularSubstitution when det g = 0.
RationalQuartic transform_quartic(const RationalQuartic& q, const RationalMat3& g);

/// Polynomial over an alphabet (the 13 invariants or the 19 generators).
struct DictTerm {
  mpq_class coeff;
  std::vector<int> exps;
};

struct DictionaryPolynomial {
  enum class Direction { FormToInvariants, InvariantsToForms };
  Direction direction = Direction::FormToInvariants;
  std::string name;
  /// FormToInvariants: Phi3(f) = scale * sum(terms), terms over invariants.
  /// InvariantsToForms: scale * I27^i27_power * I = Phi3(sum(terms)), terms
  /// over generators.
  mpq_class scale = 1;
  int i27_power = 0;
  std::vector<DictTerm> terms;
  std::string to_string() const;
};

/// alpha4 alpha6 alpha12 beta14 beta22 chi18 chi28; NotTabulated otherwise.
DictionaryPolynomial pf_polynomial(std::string_view name);
/// I3 I6 I9 J9 I27; NotTabulated otherwise.
DictionaryPolynomial pI_polynomial(std::string_view name);
const std::vector<std::string>& printed_pf_names();
const std::vector<std::string>& printed_pI_names();

/// Every term has the weighted degree forced by the direction: 3h for a
/// weight-h form, weight 28k and I27 power 3k for a degree-3k invariant.
bool degree_audit(const DictionaryPolynomial& p);

/// Evaluates sum(terms) at the invariant values (FormToInvariants) or at
/// the generator values (InvariantsToForms); the scale is not applied.
mp::Complex eval_dictionary_terms(const DictionaryPolynomial& p, std::span<const mp::Complex> values, mp::Bits prec);
mpq_class eval_dictionary_terms(const DictionaryPolynomial& p, std::span<const mpq_class> values);

}  // namespace siegel3
