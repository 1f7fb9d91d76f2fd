#pragma once

#include <mpfr.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pialg/algebra.hpp"
#include "pialg/codim.hpp"

namespace pialg {

// Arbitrary-precision real; 192-bit mantissa default, enough headroom for
// 4^500-scale sums without drift in the printed digits.
class Real {
 public:
  static constexpr mpfr_prec_t kPrec = 192;

  explicit Real(mpfr_prec_t prec = kPrec);
  Real(double v, mpfr_prec_t prec = kPrec);         // NOLINT(google-explicit-constructor)
  Real(const Integer& v, mpfr_prec_t prec = kPrec); // NOLINT(google-explicit-constructor)
  Real(const Rational& v, mpfr_prec_t prec = kPrec);// NOLINT(google-explicit-constructor)
  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }

  friend Real pow(const Real& base, const Real& e);
  friend Real log(const Real& x);
  friend Real abs(const Real& x);
  int cmp(const Real& o) const;

  double to_double() const;
  std::string str(int digits = 17) const;  // shortest deterministic form

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

struct AsymptoticParams {
  std::vector<Rational> k;  // all positive
  std::vector<Rational> r;
  Rational k_total() const;
  Rational r_total() const;
};

// (q - d)/2 + s as an exact half-integer; requires d >= q >= 1, s >= 0.
Rational predicted_t(int q, int d, int s);

// sum over compositions n_1+...+n_q = n with every n_i >= 1 of
// multinomial(n) * prod k_i^{n_i} * prod n_i^{r_i}; multinomials and rational
// powers exact, the n_i^{r_i} factors in high precision.
Real regev_beckner_lhs(const AsymptoticParams& p, long n,
                       mpfr_prec_t prec = Real::kPrec);

// (prod (k_i/k)^{r_i}) * n^r * k^n
Real regev_beckner_rhs(const AsymptoticParams& p, long n,
                       mpfr_prec_t prec = Real::kPrec);

struct FitReport {
  int d = 1;
  int window_lo = 0, window_hi = 0;  // inclusive degree range
  double t_hat = 0.0;
  double c_hat = 0.0;  // constant C of c_n ~ C n^t d^n
  std::vector<double> residuals;
  // successive-slope estimates (n, (log c_{n+1} - log c_n - log d)/log((n+1)/n))
  std::vector<std::pair<int, double>> t_hat_successive;
  std::optional<Rational> predicted;
  std::optional<double> gap;  // t_hat - predicted
};

// Least squares of log c_n - n log d against log n over [window_lo, window_hi].
FitReport fit_t(const std::vector<CodimRecord>& records, int d, int window_lo,
                int window_hi, std::optional<Rational> predicted = {});

struct ConjectureReport {
  std::string algebra;
  int dim = 0;
  int q = 0;
  std::vector<int> block_dims;
  int exp = 0;
  ParValue par;
  std::optional<Rational> predicted;  // absent when the formula's pre fails
  std::string kemer_status;
  std::vector<CodimRecord> codim;
  FitReport fit;
  std::vector<std::pair<int, std::string>> ratios;  // c_n / (n^t_pred d^n)
  std::uint64_t seed = 0;
};

// Assembles wedderburn data, exponent, Par, prediction, the codimension run,
// the fit over the last five degrees, and the ratio diagnostics. Never claims
// verification; non-certified-basic algebras are marked via kemer_status.
ConjectureReport conjecture_report(const StructureAlgebra& a, int max_n,
                                   std::uint64_t seed = 0, int workers = 1);

std::string conjecture_report_json(const ConjectureReport& rep);
std::string conjecture_report_csv(const ConjectureReport& rep);

}  // namespace pialg
