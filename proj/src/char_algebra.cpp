#include "hyperjac/char_algebra.hpp"

#include <bit>
#include <stdexcept>

namespace hyperjac {

namespace {

void check_genus(int genus) {
  if (genus < 1 || genus > kMaxGenus)
    throw std::invalid_argument("genus " + std::to_string(genus) + " outside 1.." +
                                std::to_string(kMaxGenus));
}

void check_same_size(const BinaryVector& a, const BinaryVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("binary vector length mismatch: " + a.str() + " vs " + b.str());
}

}  // namespace

BinaryVector::BinaryVector(int genus, std::uint32_t mask) : genus_(genus), mask_(mask) {
  check_genus(genus);
  if (genus < 32 && (mask >> genus) != 0)
    throw std::invalid_argument("mask has bits beyond genus " + std::to_string(genus));
}

BinaryVector BinaryVector::zero(int genus) { return BinaryVector(genus, 0); }

BinaryVector BinaryVector::unit(int genus, int k) {
  check_genus(genus);
  if (k < 1 || k > genus + 1)
    throw std::invalid_argument("unit vector index " + std::to_string(k) + " out of range");
  if (k == genus + 1) return zero(genus);
  return BinaryVector(genus, std::uint32_t{1} << (genus - k));
}

BinaryVector BinaryVector::parse(std::string_view bits) {
  if (bits.empty() || bits.size() > static_cast<std::size_t>(kMaxGenus))
    throw std::invalid_argument("binary vector must have 1.." + std::to_string(kMaxGenus) +
                                " characters: '" + std::string(bits) + "'");
  std::uint32_t mask = 0;
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("invalid binary vector '" + std::string(bits) + "'");
    mask = (mask << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return BinaryVector(static_cast<int>(bits.size()), mask);
}

int BinaryVector::operator[](int i) const {
  if (i < 0 || i >= genus_) throw std::out_of_range("binary vector index");
  return static_cast<int>((mask_ >> (genus_ - 1 - i)) & 1u);
}

int BinaryVector::weight() const { return std::popcount(mask_); }

std::string BinaryVector::str() const {
  std::string out(static_cast<std::size_t>(genus_), '0');
  for (int i = 0; i < genus_; ++i)
    if ((*this)[i]) out[static_cast<std::size_t>(i)] = '1';
  return out;
}

BinaryVector add_mod2(const BinaryVector& a, const BinaryVector& b) {
  check_same_size(a, b);
  return BinaryVector(a.size(), a.mask() ^ b.mask());
}

int dot_mod2(const BinaryVector& a, const BinaryVector& b) {
  check_same_size(a, b);
  return std::popcount(a.mask() & b.mask()) & 1;
}

BinaryVector s_vector(int genus, int k) {
  check_genus(genus);
  if (k < 0 || k > genus)
    throw std::invalid_argument("s_k index " + std::to_string(k) + " outside 0.." +
                                std::to_string(genus));
  const std::uint32_t ones = (std::uint32_t{1} << k) - 1;
  return BinaryVector(genus, ones << (genus - k));
}

std::vector<BinaryVector> enumerate(int genus) {
  check_genus(genus);
  std::vector<BinaryVector> out;
  const std::uint32_t n = std::uint32_t{1} << genus;
  out.reserve(n);
  for (std::uint32_t m = 0; m < n; ++m) out.emplace_back(genus, m);
  return out;
}

const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

Characteristic::Characteristic(BinaryVector e, BinaryVector d) : eps(e), delta(d) {
  check_same_size(eps, delta);
}

Characteristic Characteristic::parse(std::string_view text) {
  const auto semi = text.find(';');
  if (text.size() < 5 || text.front() != '[' || text.back() != ']' ||
      semi == std::string_view::npos)
    throw std::invalid_argument("characteristic must look like [eps;delta]: '" +
                                std::string(text) + "'");
  auto e = BinaryVector::parse(text.substr(1, semi - 1));
  auto d = BinaryVector::parse(text.substr(semi + 1, text.size() - semi - 2));
  return Characteristic(e, d);
}

std::string Characteristic::str() const { return "[" + eps.str() + ";" + delta.str() + "]"; }

Parity parity(const Characteristic& c) {
  return dot_mod2(c.eps, c.delta) == 0 ? Parity::even : Parity::odd;
}

std::uint64_t count_characteristics(int genus, Parity p) {
  const auto all = enumerate(genus);
  std::uint64_t n = 0;
  for (const auto& e : all)
    for (const auto& d : all)
      if (parity(Characteristic(e, d)) == p) ++n;
  return n;
}

}  // namespace hyperjac
