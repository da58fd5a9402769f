#include "galgeo/qpoly.hpp"

#include <cctype>

namespace galgeo {

QPoly qpoly_zero(const FieldTower& tw) {
  return {&tw, std::vector<uint32_t>(tw.params().n, 0)};
}

QPoly qpoly_monomial(const FieldTower& tw, uint32_t exp, uint32_t coeff) {
  if (exp >= tw.params().n) fail(Errc::exponent_out_of_range, "monomial exponent must be < n");
  QPoly f = qpoly_zero(tw);
  f.c[exp] = coeff;
  return f;
}

QPoly qpoly_from_coeffs(const FieldTower& tw, std::vector<uint32_t> coeffs) {
  if (coeffs.size() != tw.params().n) fail(Errc::bad_input, "q-polynomial needs exactly n coefficients");
  for (uint32_t v : coeffs)
    if (v >= tw.size(LayerId::fqn)) fail(Errc::bad_input, "coefficient encoding out of range");
  return {&tw, std::move(coeffs)};
}

uint32_t eval_enc(const QPoly& f, uint32_t x) {
  const Layer& l = f.tower->layer(LayerId::fqn);
  uint32_t acc = 0;
  for (uint32_t i = 0; i < f.c.size(); ++i)
    if (f.c[i]) acc = l.add(acc, l.mul(f.c[i], l.frob_q(x, i)));
  return acc;
}

Elt eval(const QPoly& f, Elt x) {
  if (x.layer != LayerId::fqn) fail(Errc::layer_mismatch, "eval: argument must lie in F_{q^n}");
  return {LayerId::fqn, eval_enc(f, x.enc)};
}

QPoly add(const QPoly& f, const QPoly& g) {
  if (f.tower != g.tower) fail(Errc::tower_mismatch, "add: towers differ");
  const Layer& l = f.tower->layer(LayerId::fqn);
  QPoly h = f;
  for (size_t i = 0; i < h.c.size(); ++i) h.c[i] = l.add(h.c[i], g.c[i]);
  return h;
}

QPoly scale(const QPoly& f, uint32_t c) {
  const Layer& l = f.tower->layer(LayerId::fqn);
  QPoly h = f;
  for (auto& v : h.c) v = l.mul(v, c);
  return h;
}

QPoly compose(const QPoly& f, const QPoly& g) {
  if (f.tower != g.tower) fail(Errc::tower_mismatch, "compose: towers differ");
  const Layer& l = f.tower->layer(LayerId::fqn);
  uint32_t n = uint32_t(f.c.size());
  QPoly h = qpoly_zero(*f.tower);
  // (f o g)_k = sum_{i+j = k mod n} f_i * g_j^{q^i}
  for (uint32_t i = 0; i < n; ++i) {
    if (!f.c[i]) continue;
    for (uint32_t j = 0; j < n; ++j) {
      if (!g.c[j]) continue;
      uint32_t k = (i + j) % n;
      h.c[k] = l.add(h.c[k], l.mul(f.c[i], l.frob_q(g.c[j], i)));
    }
  }
  return h;
}

QPoly adjoint(const QPoly& f) {
  const Layer& l = f.tower->layer(LayerId::fqn);
  uint32_t n = uint32_t(f.c.size());
  QPoly h = qpoly_zero(*f.tower);
  // coefficient a_i moves to exponent n-i with a q^{n-i} twist
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t j = (n - i) % n;
    h.c[j] = l.frob_q(f.c[i], j);
  }
  return h;
}

Mat fq_matrix(const QPoly& f) {
  const FieldTower& tw = *f.tower;
  const Layer& l = tw.layer(LayerId::fqn);
  uint32_t n = l.degree();
  Mat m(LayerId::fq, n, n);
  uint32_t basis = 1;  // encodings of 1, Z, Z^2, ...
  for (uint32_t j = 0; j < n; ++j) {
    uint32_t img = eval_enc(f, basis);
    for (uint32_t i = 0; i < n; ++i) m.at(i, j) = l.digit(img, i);
    if (j + 1 < n) basis = uint32_t(uint64_t(basis) * tw.q());
  }
  return m;
}

uint32_t kernel_dim(const QPoly& f) {
  const FieldTower& tw = *f.tower;
  return uint32_t(f.c.size()) - galgeo::rank(tw, fq_matrix(f));
}

uint32_t rank(const QPoly& f) { return galgeo::rank(*f.tower, fq_matrix(f)); }

bool trace_bilinear_check_against(const QPoly& f, const QPoly& fhat) {
  const FieldTower& tw = *f.tower;
  const Layer& l = tw.layer(LayerId::fqn);
  if (l.size() * l.size() > tw.params().enum_cap)
    fail(Errc::size_cap_exceeded, "bilinear sweep too large");
  for (uint64_t x = 0; x < l.size(); ++x)
    for (uint64_t y = 0; y < l.size(); ++y) {
      uint32_t lhs = l.trace_q(l.mul(uint32_t(x), eval_enc(f, uint32_t(y))));
      uint32_t rhs = l.trace_q(l.mul(uint32_t(y), eval_enc(fhat, uint32_t(x))));
      if (lhs != rhs) return false;
    }
  return true;
}

bool trace_bilinear_check(const QPoly& f) { return trace_bilinear_check_against(f, adjoint(f)); }

std::string to_text(const QPoly& f) {
  std::string out;
  for (uint32_t i = 0; i < f.c.size(); ++i) {
    if (!f.c[i]) continue;
    if (!out.empty()) out += " + ";
    out += std::to_string(f.c[i]);
    if (i == 1)
      out += "*X^q";
    else if (i >= 2)
      out += "*X^q" + std::to_string(i);
  }
  if (out.empty()) out = "0";
  return out;
}

QPoly qpoly_from_text(const FieldTower& tw, const std::string& text) {
  QPoly f = qpoly_zero(tw);
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  bool any = false;
  while (true) {
    skip_ws();
    if (pos >= text.size()) break;
    if (any) {
      if (text[pos] != '+') fail(Errc::bad_input, "q-polynomial text: expected '+'");
      ++pos;
      skip_ws();
    }
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail(Errc::bad_input, "q-polynomial text: expected coefficient");
    uint64_t coeff = std::stoull(text.substr(start, pos - start));
    uint32_t exp = 0;
    skip_ws();
    if (pos < text.size() && text[pos] == '*') {
      ++pos;
      skip_ws();
      if (pos + 2 < text.size() && text[pos] == 'X' && text[pos + 1] == '^' && text[pos + 2] == 'q') {
        pos += 3;
      } else {
        fail(Errc::bad_input, "q-polynomial text: expected X^q after '*'");
      }
      size_t dstart = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      exp = (pos == dstart) ? 1 : uint32_t(std::stoul(text.substr(dstart, pos - dstart)));
    }
    if (exp >= f.c.size()) fail(Errc::exponent_out_of_range, "q-polynomial text: exponent >= n");
    if (coeff >= tw.size(LayerId::fqn)) fail(Errc::bad_input, "q-polynomial text: coefficient too large");
    const Layer& l = tw.layer(LayerId::fqn);
    f.c[exp] = l.add(f.c[exp], uint32_t(coeff));
    any = true;
  }
  return f;
}

}  // namespace galgeo
