// Theta monomials, Tsuyumine's seed products, their orbit expansions into
// modular forms for Sp6(Z), evaluation, and a checksummed text format.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "siegel3/mp.hpp"
#include "siegel3/symplectic.hpp"
#include "siegel3/theta.hpp"

namespace siegel3 {

/// Exponents on the 36 even characteristics, slot k <-> even_indices()[k].
using Exponents = std::array<std::uint8_t, 36>;

/// Slot of a binary index in even_indices(), or -1 for odd characteristics.
int even_slot(int index);

struct ThetaMonomial {
  Exponents exps{};
  int sign = 1;

  int exponent(int index) const;  // by binary index; 0 on odd ones
  int degree() const;
  friend bool operator==(const ThetaMonomial&, const ThetaMonomial&) = default;
};

/// "+ 0:4 3:2", "- 1:1 ..." style rendering; with `tsuyumine` the indices are
/// printed in Tsuyumine's numbering as t<k>.
std::string to_string(const ThetaMonomial& m, bool tsuyumine = false);

/// The 33 syzygetic monomials ((i)) in use.
const std::vector<int>& syzygetic_indices();
/// Throws UnknownSyzygeticIndex.
ThetaMonomial syzygetic_monomial(int i);

struct SeedRecipe {
  std::string name;
  int weight;
  /// Factors separated by spaces, quotient after " / ":
  ///   chi18, t<idx>^k, s<i>^k (syzygetic), g<i>.<j>^k (gcd of two ((i)))
  std::string recipe;
  std::size_t expected_terms;
};

/// The 34 rows, generators first in the canonical order, then the others.
const std::vector<SeedRecipe>& seed_recipes();
/// Resolves aliases (alpha12', gamma32', c32', ...) to the table name.
/// Throws UnknownForm.
const SeedRecipe& find_recipe(std::string_view name);

/// Throws NegativeExponent if the quotient does not reduce to a monomial.
ThetaMonomial build_seed(std::string_view name);
ThetaMonomial reduce_recipe(std::string_view recipe);

/// Throws NonRealPhase when the phase is not +-1 (degree must be 0 mod 4).
ThetaMonomial transform_monomial(const SymplecticMatrix& m, const ThetaMonomial& mono);

struct FormTerm {
  Exponents exps{};
  std::int8_t coeff = 1;
};

struct ExpandedForm {
  std::string name;
  int weight = 0;
  std::vector<FormTerm> terms;  // lexicographic in exps

  /// 1451520 / #terms.
  std::uint64_t content() const;
  int max_exponent() const;
  friend bool operator==(const ExpandedForm& a, const ExpandedForm& b);
};

/// Orbit of the seed under the group generated by `gens` (the standard set
/// when empty).  Throws SignConflict.
ExpandedForm expand(const ThetaMonomial& seed, std::string name, int weight,
                    std::span<const SymplecticMatrix> gens = {});
/// build_seed + expand for a table row.
ExpandedForm expand_named(std::string_view name);

/// sum coeff * prod v_c^e_c over the 36 even slots, in term order.
mp::Complex eval_terms(const ExpandedForm& f, std::span<const mp::Complex, 36> values, mp::Bits prec);

/// The 36 even theta constants at tau (slot order).
std::array<mp::Complex, 36> even_thetas(const SiegelPoint& tau, mp::Bits prec);
/// theta_c / theta_0 in slot order (slot 0 is exactly 1).
std::array<mp::Complex, 36> theta_ratios(std::span<const mp::Complex, 36> thetas, mp::Bits prec);

mp::Complex eval_form(const ExpandedForm& f, const SiegelPoint& tau, mp::Bits prec);

/// |f(M.tau) - det(C tau + D)^h f(tau)| / max(|f(tau)|, 2^(-prec/2)).
mp::Real modularity_residual(const ExpandedForm& f, const SymplecticMatrix& m, const SiegelPoint& tau,
                             mp::Bits prec);

void save_form(const ExpandedForm& f, const std::filesystem::path& path);
/// Throws ParseError, ChecksumMismatch, ValidationError.
ExpandedForm load_form(const std::filesystem::path& path);
std::string serialize_form(const ExpandedForm& f);
ExpandedForm parse_form(std::string_view text, const std::string& source = "<memory>");

/// Loads `<dir>/<name>.form` when present, otherwise expands and stores it.
ExpandedForm cached_form(std::string_view name, const std::optional<std::filesystem::path>& dir);

}  // namespace siegel3
