#ifndef HYPERJAC_CHAR_ALGEBRA_HPP
#define HYPERJAC_CHAR_ALGEBRA_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hyperjac {

inline constexpr int kMaxGenus = 16;

/// Element of (Z/2Z)^g.
///
/// Coordinate 0 is the leftmost character of the string form and the most
/// significant bit of mask(), so ordering by mask is lexicographic order and
/// mask() is the position of the vector in enumerate(g).
class BinaryVector {
 public:
  BinaryVector() = default;
  BinaryVector(int genus, std::uint32_t mask);

  static BinaryVector zero(int genus);
  /// e_k for 1 <= k <= genus; e_{genus+1} is the zero vector.
  static BinaryVector unit(int genus, int k);
  static BinaryVector parse(std::string_view bits);

  int size() const { return genus_; }
  std::uint32_t mask() const { return mask_; }
  int operator[](int i) const;
  int weight() const;
  std::string str() const;

  friend bool operator==(const BinaryVector&, const BinaryVector&) = default;
  friend std::strong_ordering operator<=>(const BinaryVector& a, const BinaryVector& b) {
    if (auto c = a.genus_ <=> b.genus_; c != 0) return c;
    return a.mask_ <=> b.mask_;
  }

 private:
  int genus_ = 0;
  std::uint32_t mask_ = 0;
};

BinaryVector add_mod2(const BinaryVector& a, const BinaryVector& b);
inline BinaryVector operator+(const BinaryVector& a, const BinaryVector& b) { return add_mod2(a, b); }

/// Scalar product mod 2.
int dot_mod2(const BinaryVector& a, const BinaryVector& b);

/// s_k = e_1 + ... + e_k; s_0 = 0.
BinaryVector s_vector(int genus, int k);

/// All 2^g vectors in lexicographic order.
std::vector<BinaryVector> enumerate(int genus);

enum class Parity { even, odd };

const char* to_string(Parity p);

struct Characteristic {
  BinaryVector eps;
  BinaryVector delta;

  Characteristic() = default;
  Characteristic(BinaryVector e, BinaryVector d);

  int size() const { return eps.size(); }
  /// Parses "[eps;delta]", e.g. "[101;111]".
  static Characteristic parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const Characteristic&, const Characteristic&) = default;
};

Parity parity(const Characteristic& c);

/// Number of characteristics of genus g with the given parity (by enumeration).
std::uint64_t count_characteristics(int genus, Parity p);

}  // namespace hyperjac

#endif  // HYPERJAC_CHAR_ALGEBRA_HPP
