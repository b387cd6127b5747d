// Copyright 2026 The spintomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spintomo/angular.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace spintomo {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// n! as an exact big integer, cached.  Arguments stay below ~500 for every
// supported dimension, so the cache is tiny.
BigInt ExactFactorial(int n) {
  static std::vector<BigInt> cache{BigInt(1)};
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  while (static_cast<int>(cache.size()) <= n) {
    cache.push_back(cache.back() * static_cast<int>(cache.size()));
  }
  return cache[n];
}

// sign * sqrt(|ratio|) with the ratio converted to double only once; the
// conversion from the exact rational is correctly rounded, so the result is
// accurate to about one ulp regardless of how large the intermediate
// factorials grew.
double SignedSqrt(int sign, const BigRat& ratio) {
  if (sign == 0) return 0.0;
  return sign * std::sqrt(static_cast<double>(ratio));
}

int RationalSign(const BigRat& x) {
  if (x == 0) return 0;
  return x > 0 ? 1 : -1;
}

// True when (two_a, two_b, two_c) can form a coupled triad: triangle
// inequalities plus an integral perimeter (the doubled sum must be even).
bool TriadOk(int two_a, int two_b, int two_c) {
  if ((two_a + two_b + two_c) % 2 != 0) return false;
  return two_c <= two_a + two_b && two_c >= std::abs(two_a - two_b);
}

// Validates one (j, m) pair: j >= 0, |m| <= j, and m differs from j by an
// integer (equal parity of the doubled values).
void CheckMagneticPair(int two_j, int two_m) {
  if (two_j < 0) {
    throw std::domain_error("angular momentum j must be nonnegative");
  }
  if (std::abs(two_m) > two_j || (two_j + two_m) % 2 != 0) {
    throw std::domain_error("magnetic quantum number m incompatible with j");
  }
}

// Memoization keys: six doubled quantum numbers packed into 10 bits each
// (offset by 512 to admit negative m).  Supported j stay far below the
// 10-bit ceiling.
std::uint64_t PackKey6(int a, int b, int c, int d, int e, int f) {
  auto enc = [](int v) -> std::uint64_t {
    return static_cast<std::uint64_t>(v + 512) & 0x3ff;
  };
  return enc(a) | enc(b) << 10 | enc(c) << 20 | enc(d) << 30 | enc(e) << 40 |
         enc(f) << 50;
}

// A scalar memo table safe for concurrent readers with serialized inserts.
class ScalarCache {
 public:
  bool Lookup(std::uint64_t key, double* value) const {
    std::shared_lock<std::shared_mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return false;
    *value = it->second;
    return true;
  }

  void Store(std::uint64_t key, double value) {
    std::unique_lock<std::shared_mutex> lock(mutex_);
    entries_.emplace(key, value);
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, double> entries_;
};

// Racah's closed form for <j1 m1; j2 m2 | j3 m3>.  The alternating sum and
// the squared prefactor are both exact rationals; the final value is
// sign(sum) * sqrt(sum^2 * prefactor^2-part).
double ClebschGordanExact(int two_j1, int two_m1, int two_j2, int two_m2,
                          int two_j3, int two_m3) {
  const int g1 = (two_j1 + two_j2 - two_j3) / 2;
  const int g2 = (two_j1 - two_j2 + two_j3) / 2;
  const int g3 = (-two_j1 + two_j2 + two_j3) / 2;
  const int g4 = (two_j1 + two_j2 + two_j3) / 2 + 1;

  const BigRat triangle(ExactFactorial(g1) * ExactFactorial(g2) *
                            ExactFactorial(g3),
                        ExactFactorial(g4));
  const BigInt moments =
      ExactFactorial((two_j3 + two_m3) / 2) *
      ExactFactorial((two_j3 - two_m3) / 2) *
      ExactFactorial((two_j1 - two_m1) / 2) *
      ExactFactorial((two_j1 + two_m1) / 2) *
      ExactFactorial((two_j2 - two_m2) / 2) *
      ExactFactorial((two_j2 + two_m2) / 2);
  const BigRat prefactor = BigRat(two_j3 + 1) * triangle * BigRat(moments);

  // Summation limits keep every factorial argument nonnegative.
  const int a1 = g1;                                // j1 + j2 - j3
  const int a2 = (two_j1 - two_m1) / 2;             // j1 - m1
  const int a3 = (two_j2 + two_m2) / 2;             // j2 + m2
  const int b1 = (two_j3 - two_j2 + two_m1) / 2;    // j3 - j2 + m1
  const int b2 = (two_j3 - two_j1 - two_m2) / 2;    // j3 - j1 - m2
  const int k_min = std::max({0, -b1, -b2});
  const int k_max = std::min({a1, a2, a3});
  if (k_min > k_max) return 0.0;

  BigRat sum = 0;
  for (int k = k_min; k <= k_max; ++k) {
    const BigInt denom = ExactFactorial(k) * ExactFactorial(a1 - k) *
                         ExactFactorial(a2 - k) * ExactFactorial(a3 - k) *
                         ExactFactorial(b1 + k) * ExactFactorial(b2 + k);
    const BigRat term(1, denom);
    sum += (k % 2 == 0) ? term : -term;
  }
  return SignedSqrt(RationalSign(sum), sum * sum * prefactor);
}

// Delta(a, b, c) = (a+b-c)!(a-b+c)!(-a+b+c)! / (a+b+c+1)! as an exact
// rational, with doubled arguments.
BigRat TriangleFactor(int two_a, int two_b, int two_c) {
  return BigRat(ExactFactorial((two_a + two_b - two_c) / 2) *
                    ExactFactorial((two_a - two_b + two_c) / 2) *
                    ExactFactorial((-two_a + two_b + two_c) / 2),
                ExactFactorial((two_a + two_b + two_c) / 2 + 1));
}

// Racah's closed form for {j1 j2 j3; j4 j5 j6}.
double Wigner6jExact(int two_j1, int two_j2, int two_j3, int two_j4,
                     int two_j5, int two_j6) {
  const BigRat deltas = TriangleFactor(two_j1, two_j2, two_j3) *
                        TriangleFactor(two_j1, two_j5, two_j6) *
                        TriangleFactor(two_j4, two_j2, two_j6) *
                        TriangleFactor(two_j4, two_j5, two_j3);

  const int s1 = (two_j1 + two_j2 + two_j3) / 2;
  const int s2 = (two_j1 + two_j5 + two_j6) / 2;
  const int s3 = (two_j4 + two_j2 + two_j6) / 2;
  const int s4 = (two_j4 + two_j5 + two_j3) / 2;
  const int q1 = (two_j1 + two_j2 + two_j4 + two_j5) / 2;
  const int q2 = (two_j2 + two_j3 + two_j5 + two_j6) / 2;
  const int q3 = (two_j1 + two_j3 + two_j4 + two_j6) / 2;
  const int t_min = std::max({s1, s2, s3, s4});
  const int t_max = std::min({q1, q2, q3});
  if (t_min > t_max) return 0.0;

  BigRat sum = 0;
  for (int t = t_min; t <= t_max; ++t) {
    const BigInt denom = ExactFactorial(t - s1) * ExactFactorial(t - s2) *
                         ExactFactorial(t - s3) * ExactFactorial(t - s4) *
                         ExactFactorial(q1 - t) * ExactFactorial(q2 - t) *
                         ExactFactorial(q3 - t);
    const BigRat term(ExactFactorial(t + 1), denom);
    sum += (t % 2 == 0) ? term : -term;
  }
  return SignedSqrt(RationalSign(sum), sum * sum * deltas);
}

// Per-(j, m, n) expansion of the small-d element as a polynomial in
// cos(beta/2) and sin(beta/2):
//   d^j_{mn}(beta) = sum_k coeffs[k - k_min]
//                    * cos(beta/2)^(2j - 2k + n - m) * sin(beta/2)^(2k - n + m)
// with exact-rational coefficients converted to double once and cached.
struct SmallDExpansion {
  int k_min = 0;
  int k_max = -1;
  std::vector<double> coeffs;
};

const SmallDExpansion& GetSmallDExpansion(int two_j, int two_m, int two_n) {
  static std::shared_mutex mutex;
  static std::unordered_map<std::uint64_t, SmallDExpansion> cache;

  const std::uint64_t key = PackKey6(two_j, two_m, two_n, 0, 0, 0);
  {
    std::shared_lock<std::shared_mutex> lock(mutex);
    auto it = cache.find(key);
    // Node-based map: references stay valid across later insertions.
    if (it != cache.end()) return it->second;
  }

  SmallDExpansion expansion;
  const int jpn = (two_j + two_n) / 2;
  const int jmn = (two_j - two_n) / 2;
  const int jpm = (two_j + two_m) / 2;
  const int jmm = (two_j - two_m) / 2;
  const int nm = (two_n - two_m) / 2;  // n - m, an integer for equal parities
  expansion.k_min = std::max(0, nm);
  expansion.k_max = std::min(jpn, jmm);

  const BigInt numerator = ExactFactorial(jpn) * ExactFactorial(jmn) *
                           ExactFactorial(jpm) * ExactFactorial(jmm);
  for (int k = expansion.k_min; k <= expansion.k_max; ++k) {
    const BigInt denom = ExactFactorial(jpn - k) * ExactFactorial(k) *
                         ExactFactorial(jmm - k) * ExactFactorial(k - nm);
    const int sign = ((k - nm) % 2 == 0) ? 1 : -1;
    expansion.coeffs.push_back(
        SignedSqrt(sign, BigRat(numerator, denom * denom)));
  }

  std::unique_lock<std::shared_mutex> lock(mutex);
  return cache.emplace(key, std::move(expansion)).first->second;
}

// x^n for small nonnegative integer n, by squaring; keeps the hot path free
// of libm pow calls.
double IntPow(double x, int n) {
  double result = 1.0;
  double base = x;
  for (; n > 0; n >>= 1) {
    if (n & 1) result *= base;
    base *= base;
  }
  return result;
}

}  // namespace

double ClebschGordan2(int two_j1, int two_m1, int two_j2, int two_m2,
                      int two_j3, int two_m3) {
  CheckMagneticPair(two_j1, two_m1);
  CheckMagneticPair(two_j2, two_m2);
  CheckMagneticPair(two_j3, two_m3);
  if (two_m1 + two_m2 != two_m3) return 0.0;
  if (!TriadOk(two_j1, two_j2, two_j3)) return 0.0;

  static ScalarCache cache;
  const std::uint64_t key =
      PackKey6(two_j1, two_m1, two_j2, two_m2, two_j3, two_m3);
  double value;
  if (cache.Lookup(key, &value)) return value;
  value = ClebschGordanExact(two_j1, two_m1, two_j2, two_m2, two_j3, two_m3);
  cache.Store(key, value);
  return value;
}

double Wigner3j2(int two_j1, int two_j2, int two_j3, int two_m1, int two_m2,
                 int two_m3) {
  CheckMagneticPair(two_j1, two_m1);
  CheckMagneticPair(two_j2, two_m2);
  CheckMagneticPair(two_j3, two_m3);
  if (two_m1 + two_m2 + two_m3 != 0) return 0.0;
  if (!TriadOk(two_j1, two_j2, two_j3)) return 0.0;

  // Conversion from the Clebsch-Gordan coefficient:
  //   (j1 j2 j3; m1 m2 m3) = (-1)^(j1-j2-m3) <j1 m1; j2 m2 | j3, -m3>
  //                          / sqrt(2 j3 + 1).
  const int phase_exponent = (two_j1 - two_j2 - two_m3) / 2;
  const double sign = (phase_exponent % 2 == 0) ? 1.0 : -1.0;
  return sign *
         ClebschGordan2(two_j1, two_m1, two_j2, two_m2, two_j3, -two_m3) /
         std::sqrt(static_cast<double>(two_j3 + 1));
}

double Wigner6j2(int two_j1, int two_j2, int two_j3, int two_j4, int two_j5,
                 int two_j6) {
  for (int two_j : {two_j1, two_j2, two_j3, two_j4, two_j5, two_j6}) {
    if (two_j < 0) {
      throw std::domain_error("6-j arguments must be nonnegative");
    }
  }
  if (!TriadOk(two_j1, two_j2, two_j3) || !TriadOk(two_j1, two_j5, two_j6) ||
      !TriadOk(two_j4, two_j2, two_j6) || !TriadOk(two_j4, two_j5, two_j3)) {
    return 0.0;
  }

  static ScalarCache cache;
  const std::uint64_t key =
      PackKey6(two_j1, two_j2, two_j3, two_j4, two_j5, two_j6);
  double value;
  if (cache.Lookup(key, &value)) return value;
  value = Wigner6jExact(two_j1, two_j2, two_j3, two_j4, two_j5, two_j6);
  cache.Store(key, value);
  return value;
}

double WignerSmallD2(int two_j, int two_m, int two_n, double beta) {
  CheckMagneticPair(two_j, two_m);
  CheckMagneticPair(two_j, two_n);

  const SmallDExpansion& expansion = GetSmallDExpansion(two_j, two_m, two_n);
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  const int nm = (two_n - two_m) / 2;
  double result = 0.0;
  for (int k = expansion.k_min; k <= expansion.k_max; ++k) {
    const double coeff = expansion.coeffs[k - expansion.k_min];
    result += coeff * IntPow(c, two_j - 2 * k + nm) * IntPow(s, 2 * k - nm);
  }
  return result;
}

double ClebschGordan(int j1, int m1, int j2, int m2, int j3, int m3) {
  return ClebschGordan2(2 * j1, 2 * m1, 2 * j2, 2 * m2, 2 * j3, 2 * m3);
}

double Wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  return Wigner3j2(2 * j1, 2 * j2, 2 * j3, 2 * m1, 2 * m2, 2 * m3);
}

double Wigner6j(int j1, int j2, int j3, int j4, int j5, int j6) {
  return Wigner6j2(2 * j1, 2 * j2, 2 * j3, 2 * j4, 2 * j5, 2 * j6);
}

double WignerSmallD(int ell, int m, int n, double beta) {
  return WignerSmallD2(2 * ell, 2 * m, 2 * n, beta);
}

std::complex<double> WignerD(int ell, int m, int n, double alpha, double beta,
                             double gamma) {
  const double d = WignerSmallD(ell, m, n, beta);
  const double phase = -(m * alpha + n * gamma);
  return d * std::complex<double>(std::cos(phase), std::sin(phase));
}

std::complex<double> WignerDAxis(int ell, int m, int n, double alpha,
                                 double beta) {
  return WignerD(ell, m, n, 0.0, beta, alpha);
}

}  // namespace spintomo
