#ifndef HYPERJAC_IDENTITIES_HPP
#define HYPERJAC_IDENTITIES_HPP

// Cubic identities among second-order theta functions, generated symbolically
// from the hyperelliptic addition formula and reduced to a canonical form.
// Everything here is exact integer arithmetic.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperjac/char_algebra.hpp"

namespace hyperjac {

/// sign * mult * Theta[f0] Theta[f1] Theta[f2]. Factors are kept in the order
/// they were produced until canonicalize() sorts them.
struct Monomial {
  std::array<BinaryVector, 3> factors;
  int sign = 1;
  long mult = 1;

  std::string str() const;  // "+2 [000][101][101]"
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// sum of monomials = 0. content is the signed integer with
/// raw sum = content * (sum of canonical monomials); the first canonical
/// monomial always has sign +1.
struct CubicIdentity {
  int genus = 0;
  BinaryVector sigma;
  long content = 0;
  std::vector<Monomial> monomials;

  bool empty() const { return monomials.empty(); }
  friend bool operator==(const CubicIdentity&, const CubicIdentity&) = default;
};

/// Q = (tau alpha_0 + beta_0)/2, A_k = (tau alpha_k + beta_k)/2, R = (tau alpha + beta)/2.
struct HalfPeriodSpec {
  BinaryVector alpha, beta, alpha_0, beta_0;
  std::vector<BinaryVector> alpha_k, beta_k;  // k = 1..g stored at index k-1

  int genus() const { return alpha.size(); }
  void validate() const;

  /// alpha = alpha_0 = 0, beta = beta_0 = e_1, alpha_k = s_k, beta_k = e_{k+1}.
  static HalfPeriodSpec hyperelliptic(int genus);
};

/// Uncanceled terms of the hyperelliptic addition formula with everything
/// moved to the left: 2^g terms with sign + followed by (g+1) 2^g with sign -.
std::vector<Monomial> raw_terms_addhyp(const HalfPeriodSpec& spec, const BinaryVector& sigma);

/// Sorts factors, merges equal multisets, drops zeros, divides by the gcd.
CubicIdentity canonicalize(int genus, const BinaryVector& sigma, const std::vector<Monomial>& terms);

inline constexpr int kMinCubicGenus = 2;
inline constexpr int kMaxCubicGenus = 6;

/// Canonical cubic for every sigma, for the hyperelliptic half-period choice.
std::map<BinaryVector, CubicIdentity> gen_cubics(int genus);

/// "a b c + d e f + ... = g h i + ..." with "+" and "=" separated by spaces;
/// left side positive, right side negative. Returns the canonical form.
CubicIdentity parse_printed_cubic(int genus, const BinaryVector& sigma, std::string_view text);

struct ReferenceCubic {
  int genus;
  std::string sigma;
  std::string printed;
};

/// Cubics as printed in the source text: genus 3 sigma 000 and genus 4 sigma
/// 0000 and 0001.
const std::vector<ReferenceCubic>& reference_cubics();

/// Human-readable description of the first place the two identities differ,
/// or nullopt when they are equal.
std::optional<std::string> first_difference(const CubicIdentity& expected, const CubicIdentity& actual);

}  // namespace hyperjac

#endif  // HYPERJAC_IDENTITIES_HPP
