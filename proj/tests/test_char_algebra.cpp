#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "hyperjac/char_algebra.hpp"

using namespace hyperjac;

TEST_SUITE("char_algebra") {

TEST_CASE("parity examples") {
  CHECK(parity(Characteristic::parse("[101;111]")) == Parity::even);
  CHECK(parity(Characteristic::parse("[1;1]")) == Parity::odd);
  CHECK(parity(Characteristic::parse("[0000;0000]")) == Parity::even);
  CHECK_THROWS_AS(Characteristic(BinaryVector::parse("10"), BinaryVector::parse("101")),
                  std::invalid_argument);
}

TEST_CASE("add_mod2 examples") {
  CHECK((BinaryVector::parse("101") + BinaryVector::parse("110")).str() == "011");
  const auto v = BinaryVector::parse("1011");
  CHECK(v + v == BinaryVector::zero(4));
  CHECK((BinaryVector::parse("0000") + v) == v);
  CHECK_THROWS_AS(add_mod2(BinaryVector::parse("10"), BinaryVector::parse("100")),
                  std::invalid_argument);
}

TEST_CASE("s_vector examples") {
  CHECK(s_vector(4, 2).str() == "1100");
  CHECK(s_vector(3, 0).str() == "000");
  CHECK(s_vector(4, 4).str() == "1111");
  CHECK_THROWS_AS(s_vector(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(s_vector(3, -1), std::invalid_argument);
}

TEST_CASE("unit vectors, e_{g+1} is zero") {
  CHECK(BinaryVector::unit(4, 1).str() == "1000");
  CHECK(BinaryVector::unit(4, 4).str() == "0001");
  CHECK(BinaryVector::unit(4, 5) == BinaryVector::zero(4));
}

TEST_CASE("enumerate order") {
  auto e1 = enumerate(1);
  REQUIRE(e1.size() == 2);
  CHECK(e1[0].str() == "0");
  CHECK(e1[1].str() == "1");
  std::vector<std::string> e2;
  for (const auto& v : enumerate(2)) e2.push_back(v.str());
  CHECK(e2 == std::vector<std::string>{"00", "01", "10", "11"});
  auto e4 = enumerate(4);
  CHECK(e4.size() == 16);
  CHECK(e4.front().str() == "0000");
  CHECK(e4.back().str() == "1111");
  CHECK(std::is_sorted(e4.begin(), e4.end()));
  for (std::size_t i = 0; i < e4.size(); ++i) CHECK(e4[i].mask() == i);
}

TEST_CASE("serialization") {
  CHECK(BinaryVector::parse("1010").str() == "1010");
  CHECK(Characteristic::parse("[101;111]").str() == "[101;111]");
  CHECK_THROWS_AS(BinaryVector::parse("10a"), std::invalid_argument);
  CHECK_THROWS_AS(BinaryVector::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Characteristic::parse("101;111"), std::invalid_argument);
  CHECK_THROWS_AS(Characteristic::parse("[101,111]"), std::invalid_argument);
}

TEST_CASE("even and odd counts") {
  for (int g = 1; g <= 5; ++g) {
    const std::uint64_t p = std::uint64_t{1} << (g - 1), q = std::uint64_t{1} << g;
    CHECK(count_characteristics(g, Parity::even) == p * (q + 1));
    CHECK(count_characteristics(g, Parity::odd) == p * (q - 1));
  }
}

TEST_CASE("group laws and permutation invariance of parity") {
  std::mt19937_64 rng(11);
  for (int g = 1; g <= 8; ++g) {
    std::uniform_int_distribution<std::uint32_t> d(0, (1u << g) - 1);
    for (int trial = 0; trial < 50; ++trial) {
      BinaryVector a(g, d(rng)), b(g, d(rng)), c(g, d(rng));
      CHECK((a + b) + c == a + (b + c));
      CHECK(a + b == b + a);
      CHECK(a + a == BinaryVector::zero(g));

      std::vector<int> perm(static_cast<std::size_t>(g));
      for (int i = 0; i < g; ++i) perm[static_cast<std::size_t>(i)] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      auto permute = [&](const BinaryVector& v) {
        std::string s(static_cast<std::size_t>(g), '0');
        for (int i = 0; i < g; ++i) s[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = v.str()[static_cast<std::size_t>(i)];
        return BinaryVector::parse(s);
      };
      CHECK(parity(Characteristic(a, b)) == parity(Characteristic(permute(a), permute(b))));
    }
    if (g <= 5) {
      auto all = enumerate(g);
      std::set<BinaryVector> set(all.begin(), all.end());
      for (const auto& x : all)
        for (const auto& y : all) CHECK(set.count(x + y) == 1);
    }
  }
}

}  // TEST_SUITE
