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

#ifndef SPINTOMO_ANGULAR_HPP_
#define SPINTOMO_ANGULAR_HPP_

#include <complex>

// Angular-momentum coupling kernel: Clebsch-Gordan coefficients, Wigner 3-j
// and 6-j symbols, and Wigner (small and full) rotation matrix elements.
//
// Conventions, fixed globally:
//   * Condon-Shortley phases throughout.
//   * Rotations are active, with Euler angles in the z-y-z decomposition
//         R(alpha, beta, gamma) = exp(-i alpha Sz) exp(-i beta Sy)
//                                 exp(-i gamma Sz),
//     so that D^j_{mn}(alpha, beta, gamma) = <j m| R |j n>
//                                          = e^{-i m alpha} d^j_{mn}(beta)
//                                            e^{-i n gamma}.
//
// Half-integer angular momenta are passed as doubled integers: a parameter
// named two_j holds the exact value 2j, so spin-1/2 arguments never touch
// floating point.  Functions without the trailing "2" are convenience
// wrappers restricted to integer quantum numbers.
//
// Coupling coefficients are evaluated from Racah's closed-form sums using
// exact integer factorials over an arbitrary-precision rational type and
// converted to double only at the end, which avoids the catastrophic
// cancellation that plagues naive floating-point sums for large j.  Results
// are memoized; the caches tolerate concurrent readers with serialized
// insertion, and repeated calls return bit-identical values.

namespace spintomo {

// Clebsch-Gordan coefficient <j1 m1; j2 m2 | j3 m3> with doubled arguments.
// Returns exactly 0 when a selection rule fails (m3 != m1 + m2 or the
// triangle rule is violated).  Throws std::domain_error if any |m| exceeds
// its j, any j is negative, or a (j, m) pair mixes integer and half-integer.
double ClebschGordan2(int two_j1, int two_m1, int two_j2, int two_m2,
                      int two_j3, int two_m3);

// Wigner 3-j symbol (j1 j2 j3; m1 m2 m3) with doubled arguments.  Returns 0
// on selection-rule failure; domain errors as for ClebschGordan2.
double Wigner3j2(int two_j1, int two_j2, int two_j3, int two_m1, int two_m2,
                 int two_m3);

// Wigner 6-j symbol {j1 j2 j3; j4 j5 j6} with doubled arguments.  Returns 0
// when any of the four triads violates the triangle rule.  Throws
// std::domain_error on negative arguments.
double Wigner6j2(int two_j1, int two_j2, int two_j3, int two_j4, int two_j5,
                 int two_j6);

// Small Wigner matrix element d^j_{mn}(beta) with doubled indices, valid for
// integer and half-integer j.  Throws std::domain_error when |m| or |n|
// exceeds j or parities are mixed.
double WignerSmallD2(int two_j, int two_m, int two_n, double beta);

// Integer-argument wrappers.
double ClebschGordan(int j1, int m1, int j2, int m2, int j3, int m3);
double Wigner3j(int j1, int j2, int j3, int m1, int m2, int m3);
double Wigner6j(int j1, int j2, int j3, int j4, int j5, int j6);
double WignerSmallD(int ell, int m, int n, double beta);

// Full rotation matrix element D^ell_{mn}(alpha, beta, gamma) for integer
// degree ell (the only case appearing in the measurement formalism).
std::complex<double> WignerD(int ell, int m, int n, double alpha, double beta,
                             double gamma);

// Rotation matrix element evaluated at a measurement axis v = (alpha, beta):
// D^ell_{mn}(v) is shorthand for D^ell_{mn}(0, beta, alpha).
std::complex<double> WignerDAxis(int ell, int m, int n, double alpha,
                                 double beta);

}  // namespace spintomo

#endif  // SPINTOMO_ANGULAR_HPP_
