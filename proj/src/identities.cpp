#include "hyperjac/identities.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hyperjac {

std::string Monomial::str() const {
  std::ostringstream out;
  out << (sign < 0 ? '-' : '+');
  if (mult != 1) out << mult << ' ';
  for (const auto& f : factors) out << '[' << f.str() << ']';
  return out.str();
}

void HalfPeriodSpec::validate() const {
  const int g = genus();
  if (g < 1) throw std::invalid_argument("half-period spec has genus < 1");
  auto check = [g](const BinaryVector& v, const char* name) {
    if (v.size() != g) throw std::invalid_argument(std::string("half-period spec: ") + name + " has wrong length");
  };
  check(beta, "beta");
  check(alpha_0, "alpha_0");
  check(beta_0, "beta_0");
  if (static_cast<int>(alpha_k.size()) != g || static_cast<int>(beta_k.size()) != g)
    throw std::invalid_argument("half-period spec needs g entries in alpha_k and beta_k");
  for (const auto& v : alpha_k) check(v, "alpha_k");
  for (const auto& v : beta_k) check(v, "beta_k");
}

HalfPeriodSpec HalfPeriodSpec::hyperelliptic(int genus) {
  HalfPeriodSpec s;
  s.alpha = s.alpha_0 = BinaryVector::zero(genus);
  s.beta = s.beta_0 = BinaryVector::unit(genus, 1);
  for (int k = 1; k <= genus; ++k) {
    s.alpha_k.push_back(s_vector(genus, k));
    s.beta_k.push_back(BinaryVector::unit(genus, k + 1));
  }
  return s;
}

std::vector<Monomial> raw_terms_addhyp(const HalfPeriodSpec& spec, const BinaryVector& sigma) {
  spec.validate();
  const int g = spec.genus();
  if (sigma.size() != g) throw std::invalid_argument("sigma length differs from the half-period spec genus");
  auto sgn = [](int parity) { return parity ? -1 : 1; };
  const auto& a = spec.alpha;
  const auto& a0 = spec.alpha_0;
  const auto labels = enumerate(g);

  std::vector<Monomial> out;
  out.reserve(static_cast<std::size_t>(g + 2) << g);
  for (const auto& e : labels)
    out.push_back({{e + a + a0, e, sigma + a}, sgn(dot_mod2(e, spec.beta + spec.beta_0)), 1});
  for (const auto& e : labels)
    for (int k = 0; k < g; ++k) {
      const auto& ak = spec.alpha_k[static_cast<std::size_t>(k)];
      const auto& bk = spec.beta_k[static_cast<std::size_t>(k)];
      const int p = dot_mod2(e, spec.beta + spec.beta_0 + bk) ^ dot_mod2(sigma, bk);
      out.push_back({{e + a + a0, e + ak, sigma + a + ak}, -sgn(p), 1});
    }
  for (const auto& e : labels) {
    const int p = dot_mod2(e, spec.beta) ^ dot_mod2(sigma, spec.beta_0);
    out.push_back({{e + a, e, sigma + a + a0}, -sgn(p), 1});
  }
  return out;
}

CubicIdentity canonicalize(int genus, const BinaryVector& sigma, const std::vector<Monomial>& terms) {
  std::map<std::array<BinaryVector, 3>, long> acc;
  for (const auto& t : terms) {
    auto f = t.factors;
    for (const auto& x : f)
      if (x.size() != genus) throw std::invalid_argument("monomial factor length differs from genus");
    std::sort(f.begin(), f.end());
    acc[f] += t.sign * t.mult;
  }
  CubicIdentity id;
  id.genus = genus;
  id.sigma = sigma;
  long content = 0;
  for (const auto& [f, c] : acc)
    if (c != 0) content = std::gcd(content, c);
  if (content == 0) return id;
  // the map is ordered, so the first surviving entry fixes the overall sign
  for (const auto& [f, c] : acc)
    if (c != 0) {
      if (c < 0) content = -content;
      break;
    }
  for (const auto& [f, c] : acc) {
    if (c == 0) continue;
    const long m = c / content;
    id.monomials.push_back({f, m < 0 ? -1 : 1, m < 0 ? -m : m});
  }
  id.content = content;
  return id;
}

std::map<BinaryVector, CubicIdentity> gen_cubics(int genus) {
  if (genus < kMinCubicGenus || genus > kMaxCubicGenus)
    throw std::invalid_argument("gen_cubics supports genus " + std::to_string(kMinCubicGenus) + ".." +
                                std::to_string(kMaxCubicGenus) + ", got " + std::to_string(genus));
  const auto spec = HalfPeriodSpec::hyperelliptic(genus);
  std::map<BinaryVector, CubicIdentity> out;
  for (const auto& sigma : enumerate(genus)) out.emplace(sigma, canonicalize(genus, sigma, raw_terms_addhyp(spec, sigma)));
  return out;
}

CubicIdentity parse_printed_cubic(int genus, const BinaryVector& sigma, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<Monomial> terms;
  std::vector<BinaryVector> pending;
  int side = 1;
  auto flush = [&] {
    if (pending.empty()) return;
    if (pending.size() != 3)
      throw std::invalid_argument("printed cubic: monomial with " + std::to_string(pending.size()) + " factors");
    terms.push_back({{pending[0], pending[1], pending[2]}, side, 1});
    pending.clear();
  };
  std::string tok;
  bool seen_eq = false;
  while (in >> tok) {
    if (tok == "+") {
      flush();
    } else if (tok == "=") {
      if (seen_eq) throw std::invalid_argument("printed cubic has two '=' signs");
      flush();
      side = -1;
      seen_eq = true;
    } else {
      auto v = BinaryVector::parse(tok);
      if (v.size() != genus) throw std::invalid_argument("printed cubic factor '" + tok + "' has wrong length");
      pending.push_back(v);
    }
  }
  flush();
  if (!seen_eq) throw std::invalid_argument("printed cubic has no '=' sign");
  return canonicalize(genus, sigma, terms);
}

std::optional<std::string> first_difference(const CubicIdentity& expected, const CubicIdentity& actual) {
  if (expected.genus != actual.genus)
    return "genus differs: expected " + std::to_string(expected.genus) + ", got " + std::to_string(actual.genus);
  if (expected.sigma != actual.sigma)
    return "sigma differs: expected " + expected.sigma.str() + ", got " + actual.sigma.str();
  const std::size_t n = std::min(expected.monomials.size(), actual.monomials.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!(expected.monomials[i] == actual.monomials[i]))
      return "monomial " + std::to_string(i) + ": expected " + expected.monomials[i].str() + ", got " +
             actual.monomials[i].str();
  if (expected.monomials.size() != actual.monomials.size()) {
    const bool more = expected.monomials.size() > actual.monomials.size();
    const auto& extra = more ? expected.monomials[n] : actual.monomials[n];
    return std::string(more ? "missing" : "unexpected") + " monomial " + std::to_string(n) + ": " + extra.str();
  }
  return std::nullopt;
}

}  // namespace hyperjac
