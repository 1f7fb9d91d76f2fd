#include "pialg/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "json.hpp"

#include "pialg/kemer.hpp"

namespace pialg {

Real::Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
Real::Real(double v, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_d(v_, v, MPFR_RNDN);
}
Real::Real(const Integer& v, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}
Real::Real(const Rational& v, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}
Real::Real(const Real& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}
Real::Real(Real&& o) noexcept {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_swap(v_, o.v_);
}
Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}
Real& Real::operator=(Real&& o) noexcept {
  if (this != &o) mpfr_swap(v_, o.v_);
  return *this;
}
Real::~Real() { mpfr_clear(v_); }

Real& Real::operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
Real& Real::operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
Real& Real::operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
Real& Real::operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

Real pow(const Real& base, const Real& e) {
  Real out(mpfr_get_prec(base.v_));
  mpfr_pow(out.v_, base.v_, e.v_, MPFR_RNDN);
  return out;
}
Real log(const Real& x) {
  Real out(mpfr_get_prec(x.v_));
  mpfr_log(out.v_, x.v_, MPFR_RNDN);
  return out;
}
Real abs(const Real& x) {
  Real out(mpfr_get_prec(x.v_));
  mpfr_abs(out.v_, x.v_, MPFR_RNDN);
  return out;
}
int Real::cmp(const Real& o) const { return mpfr_cmp(v_, o.v_); }

double Real::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

std::string Real::str(int digits) const {
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, v_);
  return buf;
}

Rational AsymptoticParams::k_total() const {
  Rational s = 0;
  for (const auto& x : k) s += x;
  return s;
}
Rational AsymptoticParams::r_total() const {
  Rational s = 0;
  for (const auto& x : r) s += x;
  return s;
}

Rational predicted_t(int q, int d, int s) {
  if (q < 1 || d < q || s < 0)
    throw ContractError("predicted_t: requires d >= q >= 1 and s >= 0");
  Rational t = Rational(q - d, 2) + s;
  t.canonicalize();
  return t;
}

namespace {

void validate_params(const AsymptoticParams& p) {
  if (p.k.empty() || p.k.size() != p.r.size())
    throw ContractError("asymptotic params: k and r must be nonempty, same length");
  for (const auto& x : p.k)
    if (x <= 0) throw ContractError("asymptotic params: k_i must be positive");
}

Rational rational_pow(Rational base, long e) {
  Rational out = 1;
  for (long i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

Real regev_beckner_lhs(const AsymptoticParams& p, long n, mpfr_prec_t prec) {
  validate_params(p);
  int q = static_cast<int>(p.k.size());
  if (n < q) throw ContractError("regev_beckner_lhs: n below the composition floor");
  // per-part exponent tables, shared across compositions
  std::vector<Real> rexp;
  for (const auto& ri : p.r) rexp.emplace_back(ri, prec);

  Real total(prec);
  std::vector<long> parts(q);
  // multinomial maintained incrementally: choose n_1..n_{q-1}, last part fixed
  std::function<void(int, long, const Integer&, const Rational&, const Real&)> rec =
      [&](int i, long left, const Integer& binom_acc, const Rational& kpow_acc,
          const Real& npow_acc) {
        if (i == q - 1) {
          long ni = left;
          parts[i] = ni;
          Integer multinomial = binom_acc;  // prod of C(remaining, n_i) so far
          Rational exact = Rational(multinomial) * kpow_acc * rational_pow(p.k[i], ni);
          Real term(exact, prec);
          term *= npow_acc;
          term *= pow(Real(Integer(ni), prec), rexp[i]);
          total += term;
          return;
        }
        long reserve = q - 1 - i;  // later parts need >= 1 each
        for (long ni = 1; left - ni >= reserve; ++ni) {
          parts[i] = ni;
          Integer binom;
          mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(left),
                       static_cast<unsigned long>(ni));
          rec(i + 1, left - ni, binom_acc * binom,
              kpow_acc * rational_pow(p.k[i], ni),
              npow_acc * pow(Real(Integer(ni), prec), rexp[i]));
        }
      };
  rec(0, n, Integer(1), Rational(1), Real(1.0, prec));
  return total;
}

Real regev_beckner_rhs(const AsymptoticParams& p, long n, mpfr_prec_t prec) {
  validate_params(p);
  Rational k = p.k_total();
  Real out(rational_pow(k, n), prec);  // k^n exact
  for (size_t i = 0; i < p.k.size(); ++i)
    out *= pow(Real(p.k[i] / k, prec), Real(p.r[i], prec));
  out *= pow(Real(Integer(n), prec), Real(p.r_total(), prec));
  return out;
}

FitReport fit_t(const std::vector<CodimRecord>& records, int d, int window_lo,
                int window_hi, std::optional<Rational> predicted) {
  if (d < 1) throw ContractError("fit_t: d must be positive");
  if (window_lo > window_hi) throw ContractError("fit_t: empty window");
  std::vector<std::pair<int, Real>> pts;  // (n, log c_n - n log d)
  Real logd = log(Real(Integer(d)));
  std::vector<std::pair<int, Real>> logc;
  for (const auto& rec : records) {
    if (rec.n < window_lo || rec.n > window_hi) continue;
    if (rec.c_n == 0) throw ContractError("fit_t: zero codimension in window");
    Real lc = log(Real(Integer(std::to_string(rec.c_n))));
    logc.emplace_back(rec.n, lc);
    pts.emplace_back(rec.n, lc - Real(Integer(rec.n)) * logd);
  }
  if (pts.empty()) throw ContractError("fit_t: empty window");

  FitReport rep;
  rep.d = d;
  rep.window_lo = window_lo;
  rep.window_hi = window_hi;
  size_t m = pts.size();
  Real sx, sy, sxx, sxy;
  std::vector<Real> xs, ys;
  for (auto& [n, y] : pts) {
    Real x = log(Real(Integer(n)));
    xs.push_back(x);
    ys.push_back(y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  Real mm(Integer(static_cast<long>(m)));
  Real denom = mm * sxx - sx * sx;
  Real slope(0.0), intercept(0.0);
  if (m == 1 || denom.cmp(Real(0.0)) == 0) {
    slope = Real(0.0);
    intercept = sy / mm;
  } else {
    slope = (mm * sxy - sx * sy) / denom;
    intercept = (sy - slope * sx) / mm;
  }
  rep.t_hat = slope.to_double();
  Real chat(mpfr_get_prec(intercept.get()));
  mpfr_exp(chat.get(), intercept.get(), MPFR_RNDN);
  rep.c_hat = chat.to_double();
  for (size_t i = 0; i < m; ++i)
    rep.residuals.push_back((ys[i] - (slope * xs[i] + intercept)).to_double());
  for (size_t i = 0; i + 1 < logc.size(); ++i) {
    if (logc[i + 1].first != logc[i].first + 1) continue;
    Real num = logc[i + 1].second - logc[i].second - logd;
    Real den = log(Real(Integer(logc[i + 1].first))) - log(Real(Integer(logc[i].first)));
    rep.t_hat_successive.emplace_back(logc[i].first, (num / den).to_double());
  }
  if (predicted) {
    rep.predicted = predicted;
    rep.gap = rep.t_hat - Rational(*predicted).get_d();
  }
  return rep;
}

ConjectureReport conjecture_report(const StructureAlgebra& a, int max_n,
                                   std::uint64_t seed, int workers) {
  if (max_n < 1) throw ContractError("conjecture_report: max_n must be positive");
  ConjectureReport rep;
  rep.algebra = a.name;
  rep.dim = a.dim;
  rep.seed = seed;
  auto wd = wedderburn_data(a, seed);
  rep.q = wd.q;
  rep.block_dims = wd.block_dims;
  rep.exp = exp_gz(a, seed);
  rep.par = par(a, seed);
  auto basic = basicness_check(a, seed);
  rep.kemer_status = basic.estimate.status;
  try {
    rep.predicted = predicted_t(rep.q, rep.exp, rep.par.s);
  } catch (const ContractError&) {
    rep.predicted.reset();  // formula precondition fails off the basic locus
  }
  auto seq = codim_sequence(a, max_n, seed, workers);
  rep.codim = seq.records;
  int lo = std::max(1, max_n - 4);
  rep.fit = fit_t(rep.codim, std::max(rep.exp, 1), lo, max_n, rep.predicted);
  if (rep.predicted) {
    Real t(*rep.predicted);
    Real d(Integer(std::max(rep.exp, 1)));
    for (const auto& recd : rep.codim) {
      Real denom = pow(Real(Integer(recd.n)), t) * pow(d, Real(Integer(recd.n)));
      Real ratio = Real(Integer(std::to_string(recd.c_n))) / denom;
      rep.ratios.emplace_back(recd.n, ratio.str(15));
    }
  }
  return rep;
}

std::string conjecture_report_json(const ConjectureReport& rep) {
  nlohmann::json j;
  j["algebra"] = rep.algebra;
  j["dim"] = rep.dim;
  j["q"] = rep.q;
  j["block_dims"] = rep.block_dims;
  j["exp"] = rep.exp;
  j["par"] = {rep.par.dim_ss, rep.par.s};
  if (rep.predicted)
    j["predicted_t"] = to_string(*rep.predicted);
  else
    j["predicted_t"] = nullptr;
  j["kemer_status"] = rep.kemer_status;
  j["seed"] = rep.seed;
  nlohmann::json codim = nlohmann::json::array();
  for (const auto& r : rep.codim) {
    nlohmann::json rj;
    rj["n"] = r.n;
    rj["c_n"] = r.c_n;
    rj["method"] = r.method;
    rj["primes"] = r.primes;
    rj["verified"] = r.verified;
    codim.push_back(rj);
  }
  j["codim"] = codim;
  nlohmann::json fit;
  fit["d"] = rep.fit.d;
  fit["window"] = {rep.fit.window_lo, rep.fit.window_hi};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", rep.fit.t_hat);
  fit["t_hat"] = std::string(buf);
  std::snprintf(buf, sizeof buf, "%.12g", rep.fit.c_hat);
  fit["c_hat"] = std::string(buf);
  nlohmann::json res = nlohmann::json::array();
  for (double r : rep.fit.residuals) {
    std::snprintf(buf, sizeof buf, "%.12g", r);
    res.push_back(std::string(buf));
  }
  fit["residuals"] = res;
  nlohmann::json succ = nlohmann::json::array();
  for (auto [n, th] : rep.fit.t_hat_successive) {
    std::snprintf(buf, sizeof buf, "%.12g", th);
    succ.push_back({{"n", n}, {"t_hat", std::string(buf)}});
  }
  fit["t_hat_successive"] = succ;
  if (rep.fit.gap) {
    std::snprintf(buf, sizeof buf, "%.12g", *rep.fit.gap);
    fit["gap"] = std::string(buf);
  }
  j["fit"] = fit;
  nlohmann::json ratios = nlohmann::json::array();
  for (const auto& [n, s] : rep.ratios) ratios.push_back({{"n", n}, {"ratio", s}});
  j["ratios"] = ratios;
  return j.dump(2) + "\n";
}

std::string conjecture_report_csv(const ConjectureReport& rep) {
  std::string out = "n,c_n,ratio\n";
  for (size_t i = 0; i < rep.codim.size(); ++i) {
    out += std::to_string(rep.codim[i].n) + "," + std::to_string(rep.codim[i].c_n) + ",";
    out += (i < rep.ratios.size() ? rep.ratios[i].second : std::string(""));
    out += "\n";
  }
  return out;
}

}  // namespace pialg
