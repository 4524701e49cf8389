#pragma once

#include <complex>

namespace lqed {

using cplx = std::complex<double>;

// Riemann-sheet tag for analytic continuations through the band cut.
// Sheet I is the physical sheet; II and III are reached by continuing
// through the negative- and positive-energy halves of the cut.
enum class Sheet { I, II, III };

// Complete elliptic integrals in the parameter convention
// K(m) = int_0^{pi/2} (1 - m sin^2 phi)^(-1/2) dphi.

double elliptic_k(double m);  // m < 1
double elliptic_e(double m);  // m <= 1

// Principal branch, cut on m in [1, inf).  Throws on the cut.
cplx elliptic_k(cplx m);
cplx elliptic_e(cplx m);

cplx elliptic_k_deriv(cplx m);  // dK/dm
cplx elliptic_e_deriv(cplx m);  // dE/dm

// Sheet combinations: K, K +- 2i K(1-m), and E, E +- 2i [K(1-m) - E(1-m)],
// with + on sheet II and - on sheet III.
cplx elliptic_k_sheet(cplx m, Sheet sheet);
cplx elliptic_e_sheet(cplx m, Sheet sheet);
cplx elliptic_k_sheet_deriv(cplx m, Sheet sheet);
cplx elliptic_e_sheet_deriv(cplx m, Sheet sheet);

// Principal real branch W0; requires x >= -1/e.
double lambert_w0(double x);

double bessel_j0(double x);
double bessel_y0(double x);  // x > 0

// First-kind Hankel function H0^(1)(x) = J0(x) + i Y0(x), x > 0.
cplx hankel1_0(double x);

}  // namespace lqed
