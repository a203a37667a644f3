#include <cmath>
#include <random>

#include "doctest.h"
#include "hyperjac/lattice.hpp"

using namespace hyperjac;
using Mat = lattice::RMatrix<double>;
using Vec = lattice::RVector<double>;

TEST_SUITE("lattice") {

TEST_CASE("ellipsoid enumeration matches a box scan") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.4, 0.4), c(-2.0, 2.0);
  for (int g = 1; g <= 3; ++g) {
    for (int trial = 0; trial < 5; ++trial) {
      Mat A(g, g);
      for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) A(i, j) = u(rng);
      Mat Y = A.transpose() * A + Mat::Identity(g, g);
      Mat U = Y.llt().matrixU();
      Vec center(g);
      for (int i = 0; i < g; ++i) center[i] = c(rng);
      const double r2 = 6.5;
      std::size_t visited = 0;
      const auto n = lattice::enumerate_ellipsoid<double>(U, center, r2, 1'000'000, [&](const Eigen::VectorXi& k) {
        Vec d = k.cast<double>() - center;
        CHECK(d.dot(Y * d) <= r2 + 1e-12);
        ++visited;
      });
      CHECK(n == visited);
      std::size_t brute = 0;
      const int B = 8;
      Eigen::VectorXi k = Eigen::VectorXi::Constant(g, -B);
      while (true) {
        Vec d = k.cast<double>() - center;
        if (d.dot(Y * d) <= r2) ++brute;
        int i = 0;
        while (i < g && ++k[i] > B) k[i++] = -B;
        if (i == g) break;
      }
      CHECK(brute == n);
    }
  }
}

TEST_CASE("cap aborts enumeration") {
  Mat U = Mat::Identity(2, 2) * 0.01;
  Vec c = Vec::Zero(2);
  CHECK_THROWS_AS(lattice::enumerate_ellipsoid<double>(U, c, 1.0, 1000, [](const Eigen::VectorXi&) {}),
                  LatticeCapExceeded);
}

TEST_CASE("gaussian tail moments against trapezoid quadrature") {
  for (double a : {0.0, 0.7, 2.5}) {
    const auto m = lattice::gaussian_tail_moments<double>(6, a);
    for (int j = 0; j <= 6; ++j) {
      const int N = 200000;
      const double hi = a + 12.0, h = (hi - a) / N;
      double s = 0;
      for (int i = 0; i <= N; ++i) {
        const double t = a + i * h;
        const double w = (i == 0 || i == N) ? 0.5 : 1.0;
        s += w * std::pow(t, j) * std::exp(-t * t);
      }
      s *= h;
      CHECK(m[static_cast<std::size_t>(j)] == doctest::Approx(s).epsilon(1e-8));
    }
  }
}

TEST_CASE("packing bound dominates an explicit tail") {
  // Lattice T Z^2 shifted, T = sqrt(pi) * chol(Y).
  Mat Y(2, 2);
  Y << 1.0, 0.3, 0.3, 0.8;
  Mat U = Y.llt().matrixU();
  const double pi = 3.14159265358979323846;
  // shortest vector by scan
  double rho2 = 1e300;
  for (int a = -5; a <= 5; ++a)
    for (int b = -5; b <= 5; ++b) {
      if (a == 0 && b == 0) continue;
      Vec v(2);
      v << a, b;
      rho2 = std::min(rho2, pi * v.dot(Y * v));
    }
  const double rho = std::sqrt(rho2);
  Vec shift(2);
  shift << 0.37, -0.21;
  for (double R : {rho, 3.0, 4.0, 5.0}) {
    double tail = 0, tail1 = 0;
    for (int a = -40; a <= 40; ++a)
      for (int b = -40; b <= 40; ++b) {
        Vec v(2);
        v << a - shift[0], b - shift[1];
        const double r = std::sqrt(pi * v.dot(Y * v));
        if (r > R) {
          tail += std::exp(-r * r);
          tail1 += (0.5 + 2.0 * r) * std::exp(-r * r);
        }
      }
    CHECK(lattice::packing_tail_bound<double>(2, rho, R) >= tail);
    CHECK(lattice::packing_tail_bound<double>(2, rho, R, 0.5, 2.0) >= tail1);
  }
  CHECK(std::isinf(lattice::packing_tail_bound<double>(2, rho, rho / 2)));
}

}  // TEST_SUITE
