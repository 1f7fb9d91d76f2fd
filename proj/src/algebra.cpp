#include "pialg/algebra.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"

namespace pialg {

namespace {

void add_scaled(QVec& v, const Rational& c, const QVec& w) {
  for (size_t i = 0; i < v.size(); ++i)
    if (w[i] != 0) v[i] += c * w[i];
}

SparseVec to_sparse(const QVec& v) {
  SparseVec s;
  for (int k = 0; k < static_cast<int>(v.size()); ++k)
    if (v[k] != 0) s.push_back({k, v[k]});
  return s;
}

QVec to_dense(const SparseVec& s, int dim) {
  QVec v(dim, Rational(0));
  for (const auto& t : s) v[t.k] = t.c;
  return v;
}

int lex_compare(const QVec& a, const QVec& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

}  // namespace

QVec StructureAlgebra::basis_vec(int i) const {
  QVec v(dim, Rational(0));
  v[i] = 1;
  return v;
}

QVec StructureAlgebra::multiply(const QVec& x, const QVec& y) const {
  QVec out(dim, Rational(0));
  for (int i = 0; i < dim; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < dim; ++j) {
      if (y[j] == 0) continue;
      Rational c = x[i] * y[j];
      for (const auto& t : product(i, j)) out[t.k] += c * t.c;
    }
  }
  return out;
}

QVec StructureAlgebra::mult_basis_right(const QVec& x, int j) const {
  QVec out(dim, Rational(0));
  for (int i = 0; i < dim; ++i) {
    if (x[i] == 0) continue;
    for (const auto& t : product(i, j)) out[t.k] += x[i] * t.c;
  }
  return out;
}

QVec StructureAlgebra::mult_basis_left(int i, const QVec& x) const {
  QVec out(dim, Rational(0));
  for (int j = 0; j < dim; ++j) {
    if (x[j] == 0) continue;
    for (const auto& t : product(i, j)) out[t.k] += x[j] * t.c;
  }
  return out;
}

bool StructureAlgebra::check_associative() const {
  std::map<int, Rational> lhs, rhs;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const SparseVec& ij = product(i, j);
      for (int k = 0; k < dim; ++k) {
        lhs.clear();
        rhs.clear();
        for (const auto& t : ij)
          for (const auto& s : product(t.k, k)) lhs[s.k] += t.c * s.c;
        for (const auto& t : product(j, k))
          for (const auto& s : product(i, t.k)) rhs[s.k] += t.c * s.c;
        for (const auto& [key, c] : lhs)
          if (c != (rhs.count(key) ? rhs[key] : Rational(0))) return false;
        for (const auto& [key, c] : rhs)
          if (c != (lhs.count(key) ? lhs[key] : Rational(0))) return false;
      }
    }
  return true;
}

bool StructureAlgebra::check_unit() const {
  if (!unit) return true;
  for (int i = 0; i < dim; ++i) {
    QVec b = basis_vec(i);
    if (multiply(*unit, b) != b || multiply(b, *unit) != b) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Subspace

bool Subspace::insert(QVec v) {
  v = reduce(std::move(v));
  int piv = -1;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (v[i] != 0) {
      piv = i;
      break;
    }
  if (piv < 0) return false;
  Rational inv = 1 / v[piv];
  for (auto& x : v) x *= inv;
  // back-substitute into existing rows
  for (auto& r : rows_)
    if (r[piv] != 0) {
      Rational c = -r[piv];
      add_scaled(r, c, v);
    }
  size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
  rows_.insert(rows_.begin() + pos, std::move(v));
  pivots_.insert(pivots_.begin() + pos, piv);
  return true;
}

QVec Subspace::reduce(QVec v) const {
  for (size_t i = 0; i < rows_.size(); ++i) {
    const Rational& c = v[pivots_[i]];
    if (c != 0) {
      Rational nc = -c;
      add_scaled(v, nc, rows_[i]);
    }
  }
  return v;
}

bool Subspace::contains(const QVec& v) const { return pialg::is_zero(reduce(v)); }

Subspace Subspace::span(const StructureAlgebra& a, const std::vector<QVec>& gens) {
  Subspace s(&a);
  for (const auto& g : gens) s.insert(g);
  return s;
}

Subspace subspace_product(const Subspace& u, const Subspace& v) {
  if (u.ambient() != v.ambient() || u.ambient() == nullptr)
    throw ContractError("subspace_product: ambient algebras differ");
  const StructureAlgebra& a = *u.ambient();
  Subspace out(&a);
  for (const auto& x : u.rows())
    for (const auto& y : v.rows()) out.insert(a.multiply(x, y));
  return out;
}

QVec multiply_elements(const StructureAlgebra& a, const QVec& x, const QVec& y) {
  if (static_cast<int>(x.size()) != a.dim || static_cast<int>(y.size()) != a.dim)
    throw ContractError("multiply_elements: vector length mismatch");
  return a.multiply(x, y);
}

// ---------------------------------------------------------------------------
// Radical via the trace form of the left regular representation.
// Over Q, x lies in J(A) iff trace(L_{xy}) = 0 for all y.

Subspace radical(const StructureAlgebra& a) {
  int n = a.dim;
  // tr[k] = trace(L_{e_k})
  std::vector<Rational> tr(n, Rational(0));
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m)
      for (const auto& t : a.product(k, m))
        if (t.k == m) tr[k] += t.c;
  // Gram matrix G[i][j] = trace(L_{e_i e_j})
  std::vector<QVec> gram(n, QVec(n, Rational(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& t : a.product(i, j)) gram[i][j] += t.c * tr[t.k];
  // kernel of G
  Subspace rowspace(&a);
  for (auto& r : gram) rowspace.insert(std::move(r));
  std::vector<bool> pivot(n, false);
  std::vector<int> pivs;
  for (const auto& r : rowspace.rows()) {
    int p = 0;
    while (r[p] == 0) ++p;
    pivot[p] = true;
    pivs.push_back(p);
  }
  Subspace ker(&a);
  for (int f = 0; f < n; ++f) {
    if (pivot[f]) continue;
    QVec v(n, Rational(0));
    v[f] = 1;
    for (size_t i = 0; i < pivs.size(); ++i) v[pivs[i]] = -rowspace.rows()[i][f];
    ker.insert(std::move(v));
  }
  return ker;
}

int nilpotency_degree(const StructureAlgebra& a, const Subspace& j) {
  if (j.is_zero()) return 1;
  Subspace power = j;
  for (int l = 2; l <= a.dim + 1; ++l) {
    power = subspace_product(power, j);
    if (power.is_zero()) return l;
  }
  throw ContractError("nilpotency_degree: input is not nilpotent");
}

// ---------------------------------------------------------------------------
// Wedderburn data

namespace {

// Quotient A/J on the complement coordinates (non-pivot columns of J's RREF).
struct Quotient {
  StructureAlgebra q;
  std::vector<int> comp_idx;
  const StructureAlgebra* a = nullptr;
  const Subspace* j = nullptr;

  QVec project(const QVec& av) const {
    QVec red = j->reduce(av);
    QVec out(comp_idx.size(), Rational(0));
    for (size_t i = 0; i < comp_idx.size(); ++i) out[i] = red[comp_idx[i]];
    return out;
  }
  QVec lift(const QVec& qv) const {
    QVec out(a->dim, Rational(0));
    for (size_t i = 0; i < comp_idx.size(); ++i) out[comp_idx[i]] = qv[i];
    return out;
  }
};

Quotient make_quotient(const StructureAlgebra& a, const Subspace& j) {
  Quotient res;
  res.a = &a;
  res.j = &j;
  std::vector<bool> ispiv(a.dim, false);
  for (const auto& r : j.rows()) {
    int p = 0;
    while (r[p] == 0) ++p;
    ispiv[p] = true;
  }
  for (int i = 0; i < a.dim; ++i)
    if (!ispiv[i]) res.comp_idx.push_back(i);
  int dq = static_cast<int>(res.comp_idx.size());
  res.q.name = a.name + "/J";
  res.q.dim = dq;
  res.q.init_table();
  for (int i = 0; i < dq; ++i) res.q.basis_labels.push_back(a.basis_labels[res.comp_idx[i]]);
  for (int i = 0; i < dq; ++i)
    for (int k = 0; k < dq; ++k) {
      QVec prod = to_dense(a.product(res.comp_idx[i], res.comp_idx[k]), a.dim);
      res.q.set_product(i, k, to_sparse(res.project(prod)));
    }
  return res;
}

// Solve sum_j x_j cols[j] = rhs exactly; nullopt when inconsistent.
std::optional<QVec> solve_columns(const std::vector<QVec>& cols, const QVec& rhs) {
  size_t n = cols.size();
  size_t m = rhs.size();
  // augmented rows over equations
  std::vector<QVec> rows(m, QVec(n + 1, Rational(0)));
  for (size_t e = 0; e < m; ++e) {
    for (size_t jx = 0; jx < n; ++jx) rows[e][jx] = cols[jx][e];
    rows[e][n] = rhs[e];
  }
  // gaussian elimination
  std::vector<int> pivcol;
  size_t r = 0;
  for (size_t c = 0; c < n && r < m; ++c) {
    size_t sel = r;
    while (sel < m && rows[sel][c] == 0) ++sel;
    if (sel == m) continue;
    std::swap(rows[r], rows[sel]);
    Rational inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (size_t i = 0; i < m; ++i)
      if (i != r && rows[i][c] != 0) {
        Rational f = -rows[i][c];
        add_scaled(rows[i], f, rows[r]);
      }
    pivcol.push_back(static_cast<int>(c));
    ++r;
  }
  for (size_t i = r; i < m; ++i)
    if (rows[i][n] != 0) return std::nullopt;
  QVec x(n, Rational(0));
  for (size_t i = 0; i < r; ++i) x[pivcol[i]] = rows[i][n];
  return x;
}

// Minimal polynomial of a square rational matrix via Krylov on flattened powers.
// Returned monic: coeffs[0] + coeffs[1] x + ... + x^deg.
std::vector<Rational> min_poly(const std::vector<QVec>& mat) {
  int t = static_cast<int>(mat.size());
  auto matmul = [&](const std::vector<QVec>& x) {
    std::vector<QVec> y(t, QVec(t, Rational(0)));
    for (int i = 0; i < t; ++i)
      for (int k = 0; k < t; ++k) {
        if (mat[i][k] == 0) continue;
        for (int jx = 0; jx < t; ++jx) y[i][jx] += mat[i][k] * x[k][jx];
      }
    return y;
  };
  std::vector<QVec> power(t, QVec(t, Rational(0)));
  for (int i = 0; i < t; ++i) power[i][i] = 1;
  std::vector<QVec> basis;         // reduced flattened powers
  std::vector<int> piv;
  std::vector<QVec> combo;         // expression of each reduced row in powers
  for (int deg = 0;; ++deg) {
    QVec flat(static_cast<size_t>(t) * t);
    for (int i = 0; i < t; ++i)
      for (int jx = 0; jx < t; ++jx) flat[i * t + jx] = power[i][jx];
    QVec expr(deg + 1, Rational(0));
    expr[deg] = 1;
    for (size_t b = 0; b < basis.size(); ++b) {
      const Rational& c = flat[piv[b]];
      if (c != 0) {
        Rational nc = -c;
        add_scaled(flat, nc, basis[b]);
        for (size_t e = 0; e < combo[b].size(); ++e) expr[e] += nc * combo[b][e];
      }
    }
    int p = -1;
    for (int i = 0; i < t * t; ++i)
      if (flat[i] != 0) {
        p = i;
        break;
      }
    if (p < 0) {
      // expr gives the dependency: sum expr[e] T^e = 0, expr[deg] = 1
      return expr;
    }
    Rational inv = 1 / flat[p];
    for (auto& x : flat) x *= inv;
    QVec nexpr(expr.size());
    for (size_t e = 0; e < expr.size(); ++e) nexpr[e] = expr[e] * inv;
    basis.push_back(std::move(flat));
    combo.push_back(std::move(nexpr));
    piv.push_back(p);
    power = matmul(power);
  }
}

// Distinct integer roots of a monic integer polynomial, or nullopt when the
// constant term resists factoring at desk scale.
std::optional<std::vector<Integer>> integer_roots(std::vector<Integer> coeffs) {
  std::vector<Integer> roots;
  // strip roots at zero
  size_t low = 0;
  while (low + 1 < coeffs.size() && coeffs[low] == 0) ++low;
  if (low > 0) {
    roots.push_back(0);
    coeffs.erase(coeffs.begin(), coeffs.begin() + low);
  }
  if (coeffs.size() <= 1) return roots;
  Integer a0 = abs(coeffs.front());
  // divisors of a0 via trial division
  std::vector<Integer> primes;
  std::vector<int> mult;
  Integer rem = a0;
  for (Integer p = 2; p * p <= rem && p < 1000000; p = p + 1) {
    if (rem % p == 0) {
      int e = 0;
      while (rem % p == 0) {
        rem /= p;
        ++e;
      }
      primes.push_back(p);
      mult.push_back(e);
    }
  }
  if (rem > 1) {
    primes.push_back(rem);
    mult.push_back(1);
  }
  std::vector<Integer> divisors{1};
  for (size_t i = 0; i < primes.size(); ++i) {
    std::vector<Integer> next;
    Integer pk = 1;
    for (int e = 0; e <= mult[i]; ++e) {
      for (const auto& d : divisors) next.push_back(d * pk);
      pk *= primes[i];
    }
    if (next.size() > 100000) return std::nullopt;
    divisors = std::move(next);
  }
  auto horner = [](const std::vector<Integer>& c, const Integer& x) {
    Integer v = 0;
    for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
  };
  std::sort(divisors.begin(), divisors.end());
  for (const auto& d : divisors)
    for (int sign = 0; sign < 2; ++sign) {
      Integer cand = sign ? -d : d;
      if (horner(coeffs, cand) == 0) {
        roots.push_back(cand);
        // deflate
        std::vector<Integer> quo(coeffs.size() - 1);
        Integer carry = coeffs.back();
        for (size_t i = coeffs.size() - 1; i-- > 0;) {
          quo[i] = carry;
          carry = coeffs[i] + carry * cand;
        }
        coeffs = std::move(quo);
        if (coeffs.size() <= 1) return roots;
      }
    }
  return roots;
}

}  // namespace

WedderburnData wedderburn_data(const StructureAlgebra& a, std::uint64_t seed, int retries) {
  WedderburnData wd;
  wd.radical = radical(a);
  wd.nildeg = nilpotency_degree(a, wd.radical);
  Quotient quo = make_quotient(a, wd.radical);
  int dq = quo.q.dim;
  wd.dim_ss = dq;
  if (dq == 0) throw ContractError("wedderburn_data: algebra is nilpotent, no semisimple part");

  // center of A/J
  std::vector<QVec> eqs;
  for (int k = 0; k < dq; ++k)
    for (int m = 0; m < dq; ++m) {
      QVec row(dq, Rational(0));
      for (int jx = 0; jx < dq; ++jx) {
        for (const auto& t : quo.q.product(jx, k))
          if (t.k == m) row[jx] += t.c;
        for (const auto& t : quo.q.product(k, jx))
          if (t.k == m) row[jx] -= t.c;
      }
      eqs.push_back(std::move(row));
    }
  Subspace eqspace(nullptr);
  for (auto& r : eqs) eqspace.insert(std::move(r));
  std::vector<bool> ispiv(dq, false);
  std::vector<int> pivs;
  for (const auto& r : eqspace.rows()) {
    int p = 0;
    while (r[p] == 0) ++p;
    ispiv[p] = true;
    pivs.push_back(p);
  }
  std::vector<QVec> center;
  for (int f = 0; f < dq; ++f) {
    if (ispiv[f]) continue;
    QVec v(dq, Rational(0));
    v[f] = 1;
    for (size_t i = 0; i < pivs.size(); ++i) v[pivs[i]] = -eqspace.rows()[i][f];
    center.push_back(std::move(v));
  }
  int t = static_cast<int>(center.size());
  wd.q = t;

  // unit of the semisimple quotient
  std::vector<QVec> cols(dq, QVec(static_cast<size_t>(dq) * dq, Rational(0)));
  QVec rhs(static_cast<size_t>(dq) * dq, Rational(0));
  for (int jx = 0; jx < dq; ++jx)
    for (int k = 0; k < dq; ++k)
      for (const auto& term : quo.q.product(jx, k)) cols[jx][k * dq + term.k] += term.c;
  for (int k = 0; k < dq; ++k) rhs[k * dq + k] = 1;
  auto unit_q = solve_columns(cols, rhs);
  if (!unit_q) throw ContractError("wedderburn_data: quotient has no unit (not semisimple?)");

  Subspace center_space(nullptr);
  for (const auto& c : center) center_space.insert(c);
  std::vector<int> cpiv;
  for (const auto& r : center_space.rows()) {
    int p = 0;
    while (r[p] == 0) ++p;
    cpiv.push_back(p);
  }
  auto center_coords = [&](const QVec& v) {
    QVec out(t, Rational(0));
    QVec red = v;
    for (int i = 0; i < t; ++i) {
      out[i] = red[cpiv[i]];
      if (out[i] != 0) {
        Rational nc = -out[i];
        add_scaled(red, nc, center_space.rows()[i]);
      }
    }
    if (!pialg::is_zero(red)) throw ContractError("wedderburn_data: center not invariant");
    return out;
  };

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<QVec> idem_q;  // primitive central idempotents in quotient coords
  for (int attempt = 0; attempt < retries && idem_q.empty(); ++attempt) {
    QVec z(dq, Rational(0));
    for (const auto& c : center_space.rows()) {
      long coeff = 1 + static_cast<long>(rng() % 17);
      add_scaled(z, Rational(coeff), c);
    }
    // matrix of multiplication by z on the center, in center coordinates
    std::vector<QVec> tmat(t);
    for (int i = 0; i < t; ++i) tmat[i] = QVec(t, Rational(0));
    for (int jx = 0; jx < t; ++jx) {
      QVec prod = quo.q.multiply(z, center_space.rows()[jx]);
      QVec cc = center_coords(prod);
      for (int i = 0; i < t; ++i) tmat[i][jx] = cc[i];
    }
    // scale to an integer matrix
    Integer den = 1;
    for (const auto& row : tmat)
      for (const auto& x : row) den = lcm(den, x.get_den());
    std::vector<QVec> nmat(t, QVec(t, Rational(0)));
    for (int i = 0; i < t; ++i)
      for (int jx = 0; jx < t; ++jx) nmat[i][jx] = tmat[i][jx] * Rational(den);
    std::vector<Rational> mp = min_poly(nmat);
    int deg = static_cast<int>(mp.size()) - 1;
    if (deg != t) continue;  // z does not separate the components
    std::vector<Integer> icoeffs(mp.size());
    bool ok = true;
    for (size_t i = 0; i < mp.size(); ++i) {
      if (mp[i].get_den() != 1) ok = false;
      icoeffs[i] = mp[i].get_num();
    }
    if (!ok) continue;
    auto roots = integer_roots(icoeffs);
    if (!roots || static_cast<int>(roots->size()) != t) continue;
    // Lagrange interpolation at the eigenvalues of z (scaled by den)
    std::vector<QVec> cands;
    for (int i = 0; i < t; ++i) {
      QVec e = *unit_q;
      for (int jx = 0; jx < t; ++jx) {
        if (jx == i) continue;
        Rational lj(Rational((*roots)[jx]) / Rational(den));
        Rational li(Rational((*roots)[i]) / Rational(den));
        QVec factor = z;
        QVec shift = *unit_q;
        for (auto& x : shift) x *= lj;
        for (size_t m = 0; m < factor.size(); ++m) factor[m] -= shift[m];
        e = quo.q.multiply(e, factor);
        Rational inv = 1 / (li - lj);
        for (auto& x : e) x *= inv;
      }
      if (quo.q.multiply(e, e) != e) {
        cands.clear();
        break;
      }
      cands.push_back(std::move(e));
    }
    if (static_cast<int>(cands.size()) == t) idem_q = std::move(cands);
  }
  if (idem_q.empty()) throw ContractError("wedderburn_data: non-split center");

  // component dimensions and deterministic component order
  struct Comp {
    int d;
    std::vector<QVec> ideal_rows;
    QVec idem;
  };
  std::vector<Comp> comps;
  for (auto& e : idem_q) {
    Subspace ideal(nullptr);
    for (int k = 0; k < dq; ++k) ideal.insert(quo.q.multiply(e, quo.q.basis_vec(k)));
    int dd = ideal.dim();
    int d = 0;
    while (d * d < dd) ++d;
    if (d * d != dd) throw ContractError("wedderburn_data: component dimension not a perfect square");
    comps.push_back({d, ideal.rows(), std::move(e)});
  }
  std::sort(comps.begin(), comps.end(), [](const Comp& x, const Comp& y) {
    if (x.d != y.d) return x.d < y.d;
    for (size_t i = 0; i < x.ideal_rows.size(); ++i) {
      int c = lex_compare(x.ideal_rows[i], y.ideal_rows[i]);
      if (c != 0) return c < 0;
    }
    return false;
  });

  // lift idempotents to A: Newton iteration e <- 3e^2 - 2e^3 along the radical
  for (auto& comp : comps) {
    wd.block_dims.push_back(comp.d);
    QVec e = quo.lift(comp.idem);
    for (int it = 0; it < 64; ++it) {
      QVec e2 = a.multiply(e, e);
      if (e2 == e) break;
      QVec e3 = a.multiply(e2, e);
      for (int m = 0; m < a.dim; ++m) e[m] = 3 * e2[m] - 2 * e3[m];
    }
    if (a.multiply(e, e) != e) throw ContractError("wedderburn_data: idempotent lifting failed");
    wd.component_idempotents.push_back(std::move(e));
  }
  int sum = 0;
  for (int d : wd.block_dims) sum += d * d;
  if (sum != wd.dim_ss) throw ContractError("wedderburn_data: component dimensions inconsistent");
  return wd;
}

ParValue par(const StructureAlgebra& a, std::uint64_t seed) {
  WedderburnData wd = wedderburn_data(a, seed);
  return {wd.dim_ss, wd.nildeg - 1};
}

// ---------------------------------------------------------------------------
// Builders

namespace {

std::string unit_label(int i, int j) {
  return "e(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace

StructureAlgebra build_ut_algebra(const std::vector<int>& dims) {
  if (dims.empty()) throw ContractError("build_ut_algebra: empty block list");
  for (int d : dims)
    if (d < 1) throw ContractError("build_ut_algebra: block dims must be positive");
  int n = 0;
  for (int d : dims) n += d;
  std::vector<int> block_of(n);
  {
    int row = 0;
    for (size_t b = 0; b < dims.size(); ++b)
      for (int k = 0; k < dims[b]; ++k) block_of[row++] = static_cast<int>(b);
  }
  StructureAlgebra a;
  std::vector<std::vector<int>> id(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (block_of[i] <= block_of[j]) {
        id[i][j] = a.dim++;
        a.basis_labels.push_back(unit_label(i, j));
      }
  a.name = dims.size() == 1 ? "M" + std::to_string(dims[0]) : [&] {
    std::string s = "UT(";
    for (size_t b = 0; b < dims.size(); ++b) s += (b ? "," : "") + std::to_string(dims[b]);
    return s + ")";
  }();
  a.init_table();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (id[i][j] < 0) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (id[k][l] < 0 || j != k) continue;
          a.set_product(id[i][j], id[k][l], {{id[i][l], Rational(1)}});
        }
    }
  QVec u(a.dim, Rational(0));
  for (int i = 0; i < n; ++i) u[id[i][i]] = 1;
  a.unit = u;
  AlgebraMeta meta;
  {
    int row0 = 0;
    for (size_t b = 0; b < dims.size(); ++b) {
      BlockUnits bu;
      bu.d = dims[b];
      bu.unit.assign(dims[b], std::vector<int>(dims[b]));
      for (int i = 0; i < dims[b]; ++i)
        for (int j = 0; j < dims[b]; ++j) bu.unit[i][j] = id[row0 + i][row0 + j];
      meta.blocks.push_back(std::move(bu));
      row0 += dims[b];
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (id[i][j] >= 0 && block_of[i] < block_of[j]) meta.radical_basis.push_back(id[i][j]);
  a.meta = std::move(meta);
  return a;
}

StructureAlgebra build_matrix_algebra(int d) {
  if (d < 1) throw ContractError("build_matrix_algebra: d must be positive");
  return build_ut_algebra({d});
}

StructureAlgebra build_associated_algebra(const std::vector<int>& block_dims, int r, int u) {
  if (block_dims.empty() || r < 1 || u < 1)
    throw ContractError("build_associated_algebra: parameters must be positive");
  for (int d : block_dims)
    if (d < 1) throw ContractError("build_associated_algebra: block dims must be positive");
  // global matrix units
  struct Unit {
    int block, a, b;
  };
  std::vector<Unit> units;
  std::vector<int> unit_base;  // first global id of each block
  for (size_t blk = 0; blk < block_dims.size(); ++blk) {
    unit_base.push_back(static_cast<int>(units.size()));
    for (int i = 0; i < block_dims[blk]; ++i)
      for (int j = 0; j < block_dims[blk]; ++j)
        units.push_back({static_cast<int>(blk), i, j});
  }
  int nu = static_cast<int>(units.size());
  auto unit_id = [&](int blk, int i, int j) {
    return unit_base[blk] + i * block_dims[blk] + j;
  };
  auto ulabel = [&](int g) {
    return "e" + std::to_string(units[g].block + 1) + "(" + std::to_string(units[g].a + 1) +
           "," + std::to_string(units[g].b + 1) + ")";
  };

  StructureAlgebra alg;
  alg.name = [&] {
    std::string s = "Assoc(";
    for (size_t b = 0; b < block_dims.size(); ++b)
      s += (b ? "," : "") + std::to_string(block_dims[b]);
    return s + ";r=" + std::to_string(r) + ";u=" + std::to_string(u) + ")";
  }();
  for (int g = 0; g < nu; ++g) alg.basis_labels.push_back(ulabel(g));

  AssociatedInfo info;
  info.block_dims = block_dims;
  info.r = r;
  info.u = u;
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> word_index;
  for (int k = 1; k <= u; ++k) {
    // odometer over (u_0, b_1, u_1, ..., b_k, u_k)
    std::vector<int> us(k + 1, 0), bs(k, 0);
    while (true) {
      AssociatedWord w{us, bs};
      word_index[{us, bs}] = nu + static_cast<int>(info.words.size());
      std::string lab = ulabel(us[0]);
      for (int i = 0; i < k; ++i)
        lab += ".b" + std::to_string(bs[i] + 1) + "." + ulabel(us[i + 1]);
      alg.basis_labels.push_back(lab);
      info.words.push_back(std::move(w));
      // increment: bs fastest, then units
      int pos = k - 1;
      while (pos >= 0 && ++bs[pos] == r) bs[pos--] = 0;
      if (pos >= 0) continue;
      pos = k;
      while (pos >= 0 && ++us[pos] == nu) us[pos--] = 0;
      if (pos < 0) break;
    }
  }
  alg.dim = nu + static_cast<int>(info.words.size());
  alg.init_table();

  auto get_word = [&](int idx) -> AssociatedWord {
    if (idx < nu) return {{idx}, {}};
    return info.words[idx - nu];
  };
  auto find_index = [&](const AssociatedWord& w) -> int {
    if (w.bs.empty()) return w.units[0];
    auto it = word_index.find({w.units, w.bs});
    if (it == word_index.end()) throw ContractError("associated algebra: word lookup failed");
    return it->second;
  };
  for (int i = 0; i < alg.dim; ++i) {
    AssociatedWord wi = get_word(i);
    const Unit& last = units[wi.units.back()];
    for (int j = 0; j < alg.dim; ++j) {
      AssociatedWord wj = get_word(j);
      const Unit& first = units[wj.units.front()];
      if (last.block != first.block || last.b != first.a) continue;
      if (wi.bs.size() + wj.bs.size() > static_cast<size_t>(u)) continue;
      AssociatedWord prod;
      prod.units = wi.units;
      prod.units.back() = unit_id(last.block, last.a, first.b);
      prod.units.insert(prod.units.end(), wj.units.begin() + 1, wj.units.end());
      prod.bs = wi.bs;
      prod.bs.insert(prod.bs.end(), wj.bs.begin(), wj.bs.end());
      alg.set_product(i, j, {{find_index(prod), Rational(1)}});
    }
  }
  QVec one(alg.dim, Rational(0));
  for (int g = 0; g < nu; ++g)
    if (units[g].a == units[g].b) one[g] = 1;
  alg.unit = one;
  AlgebraMeta meta;
  for (size_t blk = 0; blk < block_dims.size(); ++blk) {
    BlockUnits bu;
    bu.d = block_dims[blk];
    bu.unit.assign(bu.d, std::vector<int>(bu.d));
    for (int i = 0; i < bu.d; ++i)
      for (int j = 0; j < bu.d; ++j) bu.unit[i][j] = unit_id(static_cast<int>(blk), i, j);
    meta.blocks.push_back(std::move(bu));
  }
  for (int wi = 0; wi < static_cast<int>(info.words.size()); ++wi)
    meta.radical_basis.push_back(nu + wi);
  alg.meta = std::move(meta);
  alg.assoc = std::move(info);
  return alg;
}

StructureAlgebra direct_product(const StructureAlgebra& a, const StructureAlgebra& b) {
  if (a.dim < 1 || b.dim < 1) throw ContractError("direct_product: factors must be nonzero");
  StructureAlgebra p;
  p.name = a.name + "x" + b.name;
  p.dim = a.dim + b.dim;
  for (const auto& l : a.basis_labels) p.basis_labels.push_back("L." + l);
  for (const auto& l : b.basis_labels) p.basis_labels.push_back("R." + l);
  p.init_table();
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) p.set_product(i, j, a.product(i, j));
  for (int i = 0; i < b.dim; ++i)
    for (int j = 0; j < b.dim; ++j) {
      SparseVec s = b.product(i, j);
      for (auto& t : s) t.k += a.dim;
      p.set_product(a.dim + i, a.dim + j, std::move(s));
    }
  if (a.unit && b.unit) {
    QVec u(p.dim, Rational(0));
    for (int i = 0; i < a.dim; ++i) u[i] = (*a.unit)[i];
    for (int i = 0; i < b.dim; ++i) u[a.dim + i] = (*b.unit)[i];
    p.unit = u;
  }
  if (a.meta && b.meta) {
    AlgebraMeta meta = *a.meta;
    for (const auto& bu : b.meta->blocks) {
      BlockUnits nb = bu;
      for (auto& row : nb.unit)
        for (auto& x : row) x += a.dim;
      meta.blocks.push_back(std::move(nb));
    }
    for (int x : b.meta->radical_basis) meta.radical_basis.push_back(x + a.dim);
    p.meta = std::move(meta);
  }
  return p;
}

// ---------------------------------------------------------------------------
// JSON serialization

std::string algebra_to_json(const StructureAlgebra& a) {
  nlohmann::json j;
  j["name"] = a.name;
  j["dim"] = a.dim;
  j["basis"] = a.basis_labels;
  if (a.unit) {
    std::vector<std::string> u;
    for (const auto& c : *a.unit) u.push_back(to_string(c));
    j["unit"] = u;
  } else {
    j["unit"] = nullptr;
  }
  std::vector<nlohmann::json> triples;
  for (int i = 0; i < a.dim; ++i)
    for (int jx = 0; jx < a.dim; ++jx)
      for (const auto& t : a.product(i, jx))
        triples.push_back({i, jx, t.k, to_string(t.c)});
  j["mul"] = triples;
  return j.dump(2);
}

StructureAlgebra algebra_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  StructureAlgebra a;
  a.name = j.at("name").get<std::string>();
  a.dim = j.at("dim").get<int>();
  if (a.dim < 1) throw ContractError("algebra_from_json: dim must be positive");
  a.basis_labels = j.at("basis").get<std::vector<std::string>>();
  if (static_cast<int>(a.basis_labels.size()) != a.dim)
    throw ContractError("algebra_from_json: basis label count mismatch");
  a.init_table();
  if (!j.at("unit").is_null()) {
    QVec u;
    for (const auto& s : j.at("unit")) u.push_back(parse_rational(s.get<std::string>()));
    if (static_cast<int>(u.size()) != a.dim)
      throw ContractError("algebra_from_json: unit length mismatch");
    a.unit = u;
  }
  std::map<std::pair<int, int>, SparseVec> table;
  for (const auto& t : j.at("mul")) {
    int i = t.at(0).get<int>(), jx = t.at(1).get<int>(), k = t.at(2).get<int>();
    if (i < 0 || i >= a.dim || jx < 0 || jx >= a.dim || k < 0 || k >= a.dim)
      throw ContractError("algebra_from_json: index out of range");
    table[{i, jx}].push_back({k, parse_rational(t.at(3).get<std::string>())});
  }
  for (auto& [key, vec] : table) {
    std::sort(vec.begin(), vec.end(), [](const SparseTerm& x, const SparseTerm& y) {
      return x.k < y.k;
    });
    a.set_product(key.first, key.second, std::move(vec));
  }
  return a;
}

// ---------------------------------------------------------------------------
// Builder mini-language

namespace {

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

StructureAlgebra build_from_spec(const std::string& spec) {
  if (spec.rfind("mat:", 0) == 0) return build_matrix_algebra(std::stoi(spec.substr(4)));
  if (spec.rfind("ut:", 0) == 0) return build_ut_algebra(parse_int_list(spec.substr(3)));
  if (spec.rfind("assoc:", 0) == 0) {
    std::string rest = spec.substr(6);
    auto p1 = rest.find(';');
    auto p2 = rest.find(';', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
      throw ContractError("assoc spec needs blocks;r;u");
    return build_associated_algebra(parse_int_list(rest.substr(0, p1)),
                                    std::stoi(rest.substr(p1 + 1, p2 - p1 - 1)),
                                    std::stoi(rest.substr(p2 + 1)));
  }
  if (spec.rfind("prod:", 0) == 0) {
    std::string rest = spec.substr(5);
    size_t sep = rest.find('*');
    size_t len = 1;
    if (sep == std::string::npos) {
      sep = rest.find("\xc3\x97");  // U+00D7
      len = 2;
    }
    if (sep == std::string::npos) throw ContractError("prod spec needs two factors");
    return direct_product(build_from_spec(rest.substr(0, sep)),
                          build_from_spec(rest.substr(sep + len)));
  }
  throw ContractError("unknown builder spec: " + spec);
}

}  // namespace pialg
