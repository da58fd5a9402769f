#pragma once

#include <string>

#include "galgeo/linalg.hpp"
#include "galgeo/tower.hpp"

namespace galgeo {

// q-polynomial sum_i a_i x^{q^i} over F_{q^n}, dense with exactly n
// coefficients. These are the F_q-linear endomorphisms of F_{q^n} under
// addition and composition mod x^{q^n} - x.
struct QPoly {
  const FieldTower* tower = nullptr;
  std::vector<uint32_t> c;  // layer fqn encodings, length n

  bool is_zero() const {
    for (uint32_t v : c)
      if (v) return false;
    return true;
  }
  friend bool operator==(const QPoly& a, const QPoly& b) { return a.c == b.c; }
};

QPoly qpoly_zero(const FieldTower& tw);
QPoly qpoly_monomial(const FieldTower& tw, uint32_t exp, uint32_t coeff = 1);
QPoly qpoly_from_coeffs(const FieldTower& tw, std::vector<uint32_t> coeffs);

Elt eval(const QPoly& f, Elt x);
uint32_t eval_enc(const QPoly& f, uint32_t x);
QPoly add(const QPoly& f, const QPoly& g);
QPoly scale(const QPoly& f, uint32_t c);  // c in F_{q^n}
QPoly compose(const QPoly& f, const QPoly& g);
QPoly adjoint(const QPoly& f);

// Matrix of x -> f(x) over F_q in the power basis of F_{q^n}.
Mat fq_matrix(const QPoly& f);
uint32_t kernel_dim(const QPoly& f);
uint32_t rank(const QPoly& f);

// Adjoint correctness oracle: Tr(x f(y)) == Tr(y f^(x)) for all x, y.
bool trace_bilinear_check(const QPoly& f);
// Same sweep against an explicitly supplied candidate adjoint (negative
// controls in tests).
bool trace_bilinear_check_against(const QPoly& f, const QPoly& fhat);

// Text form "a0 + a1*X^q + a2*X^q2 + ..." with canonical integer
// coefficients; zero terms omitted, "0" for the zero polynomial.
std::string to_text(const QPoly& f);
QPoly qpoly_from_text(const FieldTower& tw, const std::string& text);

}  // namespace galgeo
