#include "pialg/kemer.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <utility>

#include "json.hpp"

namespace pialg {

namespace {

void axpy(QVec& acc, const Rational& c, const QVec& v) {
  for (size_t i = 0; i < v.size(); ++i) acc[i] += c * v[i];
}

int sign_by_inversions(const std::vector<int>& ids) {
  int inv = 0;
  for (size_t i = 0; i < ids.size(); ++i)
    for (size_t j = i + 1; j < ids.size(); ++j)
      if (ids[i] > ids[j]) ++inv;
  return (inv & 1) ? -1 : 1;
}

Integer factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// cap_m at fixed values: subset DP over the value set. W[mask] sums, over
// orderings of the values in mask, sign * y_1 v y_2 v ... y_k v; appending
// value t last costs the parity of the values above t still inside mask.
QVec cap_value(const StructureAlgebra& a, const std::vector<const QVec*>& vals,
               const std::vector<QVec>& y) {
  int m = static_cast<int>(vals.size());
  if (static_cast<int>(y.size()) != m + 1)
    throw ContractError("cap_value: y arity mismatch");
  int full = (1 << m) - 1;
  std::vector<QVec> W(full + 1);
  std::vector<char> has(full + 1, 0);
  for (int t = 0; t < m; ++t) {
    QVec v = a.multiply(y[0], *vals[t]);
    if (!is_zero(v)) {
      W[1 << t] = std::move(v);
      has[1 << t] = 1;
    }
  }
  for (int mask = 3; mask <= full; ++mask) {
    int k = __builtin_popcount(mask);
    if (k < 2) continue;
    QVec acc(a.dim, Rational(0));
    bool any = false;
    for (int t = 0; t < m; ++t) {
      if (!(mask >> t & 1)) continue;
      int prev = mask ^ (1 << t);
      if (!has[prev]) continue;
      QVec term = a.multiply(a.multiply(W[prev], y[k - 1]), *vals[t]);
      if (is_zero(term)) continue;
      int above = __builtin_popcount(mask >> (t + 1));
      axpy(acc, Rational((above & 1) ? -1 : 1), term);
      any = true;
    }
    if (any && !is_zero(acc)) {
      W[mask] = std::move(acc);
      has[mask] = 1;
    }
  }
  if (!has[full]) return QVec(a.dim, Rational(0));
  return a.multiply(W[full], y[m]);
}

// One surviving way to scatter a set's values: per-block Capelli factors plus
// (big sets) the bridge slot. Distributions with any vanishing factor are
// dropped at construction.
struct Distribution {
  int sign = 1;
  std::vector<const QVec*> caps;  // per block position, cached
  const QVec* wval = nullptr;     // big sets only
};

struct CapCache {
  std::map<std::pair<int, std::vector<int>>, QVec> store;
};

void enum_subsets(const std::vector<int>& pool, int k, std::vector<int>& cur,
                  size_t from, const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(cur.size()) == k) {
    emit(cur);
    return;
  }
  for (size_t i = from; i < pool.size(); ++i) {
    cur.push_back(pool[i]);
    enum_subsets(pool, k, cur, i + 1, emit);
    cur.pop_back();
  }
}

}  // namespace

QVec evaluate_structured(const StructureAlgebra& a, const StructuredFamily& fam,
                         const StructuredAssignment& asg, long max_combos) {
  int qn = static_cast<int>(fam.block_dims.size());
  if (qn == 0 || fam.mu < 1 || fam.b < 0 || fam.b > qn - 1 || fam.b > fam.mu)
    throw ContractError("evaluate_structured: inconsistent family");
  if (static_cast<int>(asg.xunits.size()) != qn ||
      static_cast<int>(asg.yvals.size()) != qn ||
      static_cast<int>(asg.bridges.size()) != qn - 1)
    throw ContractError("evaluate_structured: assignment arity mismatch");
  std::vector<int> msz(qn);
  int d = 0;
  for (int g = 0; g < qn; ++g) {
    msz[g] = fam.block_dims[g] * fam.block_dims[g];
    if (static_cast<int>(asg.xunits[g].size()) != msz[g] ||
        static_cast<int>(asg.yvals[g].size()) != msz[g] + 1)
      throw ContractError("evaluate_structured: block value arity mismatch");
    d += msz[g];
  }
  // value pool: ids 0..d-1 the unit values in block order, d+j bridge j+1
  std::vector<const QVec*> pool;
  for (int g = 0; g < qn; ++g)
    for (const auto& v : asg.xunits[g]) pool.push_back(&v);
  for (const auto& v : asg.bridges) pool.push_back(&v);

  CapCache cache;
  auto cap_of = [&](int g, const std::vector<int>& ids) -> const QVec* {
    auto key = std::make_pair(g, ids);
    auto it = cache.store.find(key);
    if (it == cache.store.end()) {
      std::vector<const QVec*> vals;
      for (int id : ids) vals.push_back(pool[id]);
      it = cache.store.emplace(key, cap_value(a, vals, asg.yvals[g])).first;
    }
    return is_zero(it->second) ? nullptr : &it->second;
  };

  // surviving distributions per alternating set
  std::vector<std::vector<Distribution>> dists(fam.mu);
  for (int j = 0; j < fam.mu; ++j) {
    bool big = j < fam.b;
    std::vector<int> ids(d);
    for (int i = 0; i < d; ++i) ids[i] = i;
    if (big) ids.push_back(d + j);
    std::vector<std::vector<int>> chosen(qn);
    std::function<void(int, std::vector<int>)> rec = [&](int g, std::vector<int> rest) {
      if (g == qn) {
        Distribution dist;
        std::vector<int> concat;
        dist.caps.resize(qn);
        for (int h = 0; h < qn; ++h) {
          const QVec* c = cap_of(h, chosen[h]);
          if (!c) return;
          dist.caps[h] = c;
          concat.insert(concat.end(), chosen[h].begin(), chosen[h].end());
        }
        if (big) {
          dist.wval = pool[rest[0]];
          concat.push_back(rest[0]);
        }
        dist.sign = sign_by_inversions(concat);
        dists[j].push_back(std::move(dist));
        return;
      }
      std::vector<int> cur;
      enum_subsets(rest, msz[g], cur, 0, [&](const std::vector<int>& sub) {
        chosen[g] = sub;
        std::vector<int> nrest;
        size_t si = 0;
        for (int id : rest) {
          if (si < sub.size() && sub[si] == id) {
            ++si;
            continue;
          }
          nrest.push_back(id);
        }
        rec(g + 1, std::move(nrest));
      });
    };
    rec(0, ids);
  }

  QVec acc(a.dim, Rational(0));
  long combos = 1;
  for (const auto& dj : dists) {
    if (dj.empty()) return acc;
    if (combos > max_combos / static_cast<long>(dj.size()))
      throw ContractError("evaluate_structured: combination budget exceeded");
    combos *= static_cast<long>(dj.size());
  }

  std::vector<const QVec*> wchosen(fam.b, nullptr);
  std::function<void(int, const std::vector<QVec>&, int)> walk =
      [&](int j, const std::vector<QVec>& partials, int sign) {
        if (j == fam.mu) {
          QVec chain = partials[0];
          for (int g = 1; g < qn && !is_zero(chain); ++g) {
            const QVec& wv = (g - 1 < fam.b) ? *wchosen[g - 1] : asg.bridges[g - 1];
            chain = a.multiply(a.multiply(chain, wv), partials[g]);
          }
          if (!is_zero(chain)) axpy(acc, Rational(sign), chain);
          return;
        }
        for (const auto& dist : dists[j]) {
          std::vector<QVec> next(qn);
          bool dead = false;
          for (int g = 0; g < qn; ++g) {
            next[g] = (j == 0) ? *dist.caps[g] : a.multiply(partials[g], *dist.caps[g]);
            if (is_zero(next[g])) {
              dead = true;
              break;
            }
          }
          if (dead) continue;
          if (j < fam.b) wchosen[j] = dist.wval;
          walk(j + 1, next, sign * dist.sign);
        }
      };
  walk(0, std::vector<QVec>(qn), 1);

  // within-group orderings collapse against the Capelli alternation
  Integer scale = 1;
  for (int g = 0; g < qn; ++g) scale *= factorial(msz[g]);
  Rational fac(scale);
  Rational total = 1;
  for (int j = 0; j < fam.mu; ++j) total *= fac;
  for (auto& c : acc) c *= total;
  return acc;
}

int exp_gz(const StructureAlgebra& a, std::uint64_t seed) {
  auto wd = wedderburn_data(a, seed);
  if (wd.q == 0) return 0;
  std::vector<Subspace> comp;
  std::vector<int> weight(wd.q);
  for (int i = 0; i < wd.q; ++i) {
    Subspace s(&a);
    const QVec& e = wd.component_idempotents[i];
    for (int k = 0; k < a.dim; ++k)
      s.insert(a.multiply(a.multiply(e, a.basis_vec(k)), e));
    comp.push_back(std::move(s));
    weight[i] = wd.block_dims[i] * wd.block_dims[i];
  }
  int best = 0;
  std::vector<char> used(wd.q, 0);
  std::function<void(const Subspace&, int)> rec = [&](const Subspace& chain, int sum) {
    best = std::max(best, sum);
    for (int j = 0; j < wd.q; ++j) {
      if (used[j]) continue;
      Subspace next = subspace_product(subspace_product(chain, wd.radical), comp[j]);
      if (next.is_zero()) continue;
      used[j] = 1;
      rec(next, sum + weight[j]);
      used[j] = 0;
    }
  };
  for (int i = 0; i < wd.q; ++i) {
    used[i] = 1;
    rec(comp[i], weight[i]);
    used[i] = 0;
  }
  return best;
}

namespace {

// snake evaluation data for a chain of blocks; nullopt when some junction has
// no radical element connecting consecutive snake anchors
std::optional<StructuredAssignment> build_chain_assignment(
    const StructureAlgebra& a, const AlgebraMeta& meta, const std::vector<int>& sub) {
  StructuredAssignment asg;
  std::vector<QVec> anchors;  // diagonal unit at each block's circuit start
  for (int id : sub) {
    const BlockUnits& bu = meta.blocks[id];
    auto order = eulerian_unit_order(bu.d);
    std::vector<QVec> xs, ys;
    for (auto [r, c] : order) xs.push_back(a.basis_vec(bu.unit[r][c]));
    for (auto [r, c] : order) ys.push_back(a.basis_vec(bu.unit[r][r]));
    int end = order.back().second;
    ys.push_back(a.basis_vec(bu.unit[end][end]));
    anchors.push_back(a.basis_vec(bu.unit[order.front().first][order.front().first]));
    asg.xunits.push_back(std::move(xs));
    asg.yvals.push_back(std::move(ys));
  }
  for (size_t t = 0; t + 1 < sub.size(); ++t) {
    bool found = false;
    for (int rb : meta.radical_basis) {
      QVec w = a.basis_vec(rb);
      if (!is_zero(a.multiply(a.multiply(anchors[t], w), anchors[t + 1]))) {
        asg.bridges.push_back(std::move(w));
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return asg;
}

// expand the alternated bridged product when the term count stays small
void try_expand_witness(KemerWitness& w) {
  try {
    const long max_terms = 200000;
    // the bridged product alone has prod_g (d_g^2)!^mu terms; bail before
    // materializing anything that cannot fit
    Integer product_terms = 1;
    for (int dg : w.family.block_dims)
      for (int j = 0; j < w.family.mu && product_terms <= max_terms; ++j)
        product_terms *= factorial(dg * dg);
    Integer projected = product_terms;
    for (int j = 0; j < w.family.mu && projected <= 100 * Integer(max_terms); ++j)
      projected *= factorial(w.r + (j < w.family.b ? 1 : 0));
    if (projected > 100 * Integer(max_terms)) return;
    MultilinearPolynomial p = capelli_product_bridged(w.family.block_dims, w.family.mu);
    MultilinearPolynomial f = p;
    f.shape.reset();
    int qn = static_cast<int>(w.family.block_dims.size());
    AlternationShape shape;
    std::set<int> constrained;
    for (int j = 1; j <= w.family.mu; ++j) {
      std::vector<int> xs;
      for (int i = 1; i <= qn; ++i) {
        int m = w.family.block_dims[i - 1] * w.family.block_dims[i - 1];
        for (int k = 1; k <= m; ++k)
          xs.push_back(p.var_index("x_" + std::to_string(i) + "_" + std::to_string(j) +
                                   "_" + std::to_string(k)));
      }
      if (j <= w.family.b) xs.push_back(p.var_index("w_" + std::to_string(j)));
      f = alternate(f, xs, max_terms);
      for (int v : xs) constrained.insert(v);
      if (j <= w.family.b)
        shape.big_sets.push_back(xs);
      else
        shape.small_sets.push_back(xs);
    }
    for (int v = 0; v < p.nvars(); ++v)
      if (!constrained.count(v)) shape.free_vars.push_back(v);
    f.shape = std::move(shape);

    Assignment named;
    for (int i = 1; i <= qn; ++i) {
      int m = w.family.block_dims[i - 1] * w.family.block_dims[i - 1];
      for (int j = 1; j <= w.family.mu; ++j) {
        std::string tag =
            std::to_string(i) + "_" + std::to_string(j) + "_";
        for (int k = 1; k <= m; ++k)
          named["x_" + tag + std::to_string(k)] = w.assignment.xunits[i - 1][k - 1];
        for (int k = 1; k <= m + 1; ++k)
          named["y_" + tag + std::to_string(k)] = w.assignment.yvals[i - 1][k - 1];
      }
    }
    for (int j = 1; j <= qn - 1; ++j)
      named["w_" + std::to_string(j)] = w.assignment.bridges[j - 1];
    w.polynomial = std::move(f);
    w.named_assignment = std::move(named);
  } catch (const ContractError&) {
    w.polynomial.reset();
    w.named_assignment.reset();
  }
}

// nonzero product of nu basis elements, the r = 1 baseline
std::optional<KemerWitness> baseline_witness(const StructureAlgebra& a, int nu) {
  std::vector<int> seq;
  QVec found;
  std::function<bool(const QVec&, int)> dfs = [&](const QVec& prefix, int depth) {
    if (depth == nu) {
      found = prefix;
      return true;
    }
    for (int k = 0; k < a.dim; ++k) {
      QVec nxt = depth == 0 ? a.basis_vec(k) : a.mult_basis_right(prefix, k);
      if (is_zero(nxt)) continue;
      seq.push_back(k);
      if (dfs(nxt, depth + 1)) return true;
      seq.pop_back();
    }
    return false;
  };
  if (!dfs(QVec(), 0)) return std::nullopt;
  KemerWitness w;
  w.r = 1;
  w.big_sets = 0;
  w.nu = nu;
  MultilinearPolynomial f;
  AlternationShape shape;
  Word word;
  Assignment named;
  for (int i = 0; i < nu; ++i) {
    std::string name = "v" + std::to_string(i + 1);
    f.variables.push_back(name);
    word.push_back(i);
    shape.small_sets.push_back({i});
    named[name] = a.basis_vec(seq[i]);
  }
  f.add_term(word, 1);
  f.shape = shape;
  w.polynomial = std::move(f);
  w.named_assignment = std::move(named);
  w.value = found;
  return w;
}

}  // namespace

KemerEstimate kemer_lower_bound_search(const StructureAlgebra& a, int nu,
                                       long budget, std::uint64_t seed) {
  if (nu < 1) throw ContractError("kemer_lower_bound_search: nu must be positive");
  KemerEstimate est;
  est.nu = nu;
  est.par = par(a, seed);
  est.status = "lower_bound_only";

  bool found = false;
  if (a.meta && !a.meta->blocks.empty()) {
    int q = static_cast<int>(a.meta->blocks.size());
    std::vector<std::pair<int, std::vector<int>>> subs;  // (-r, ids)
    for (int mask = 1; mask < (1 << q); ++mask) {
      std::vector<int> ids;
      int r = 0;
      for (int i = 0; i < q; ++i)
        if (mask >> i & 1) {
          ids.push_back(i);
          r += a.meta->blocks[i].d * a.meta->blocks[i].d;
        }
      subs.emplace_back(-r, std::move(ids));
    }
    std::sort(subs.begin(), subs.end());
    for (const auto& [negr, sub] : subs) {
      auto asg = build_chain_assignment(a, *a.meta, sub);
      if (!asg) continue;
      std::vector<int> dims;
      for (int id : sub) dims.push_back(a.meta->blocks[id].d);
      for (int b = static_cast<int>(sub.size()) - 1; b >= 0 && !found; --b) {
        StructuredFamily fam{dims, sub, nu + b, b};
        QVec val;
        try {
          val = evaluate_structured(a, fam, *asg, budget);
        } catch (const ContractError&) {
          continue;
        }
        if (is_zero(val)) continue;
        KemerWitness w;
        w.r = -negr;
        w.big_sets = b;
        w.nu = nu;
        w.family = fam;
        w.assignment = *asg;
        w.value = std::move(val);
        try_expand_witness(w);
        est.d_lower = w.r;
        est.s_lower = b;
        est.witnesses.push_back(std::move(w));
        found = true;
      }
      if (found) break;
    }
  }
  if (!found) {
    auto w = baseline_witness(a, nu);
    if (w) {
      est.d_lower = 1;
      est.s_lower = 0;
      est.witnesses.push_back(std::move(*w));
    }
  }
  if (est.d_lower == est.par.dim_ss && est.s_lower == est.par.s)
    est.status = "certified_basic";
  return est;
}

bool refute_alternating(const StructureAlgebra& a, int nu, int r, int extra_vars) {
  if (nu < 1 || r < 1 || extra_vars < 0)
    throw ContractError("refute_alternating: bad parameters");
  int m = nu * r + extra_vars;
  if (m > 10) throw ContractError("refute_alternating: stratum too large");
  std::vector<std::vector<int>> sets(nu);
  for (int j = 0; j < nu; ++j)
    for (int k = 0; k < r; ++k) sets[j].push_back(j * r + k);
  std::vector<std::string> names;
  for (int v = 0; v < m; ++v) names.push_back("v" + std::to_string(v + 1));

  std::vector<int> word(m);
  for (int v = 0; v < m; ++v) word[v] = v;
  do {
    // canonical representative: each set's variables appear in ascending order
    std::vector<int> pos(m);
    for (int p = 0; p < m; ++p) pos[word[p]] = p;
    bool canonical = true;
    for (const auto& s : sets)
      for (size_t k = 0; k + 1 < s.size() && canonical; ++k)
        if (pos[s[k]] > pos[s[k + 1]]) canonical = false;
    if (!canonical) continue;

    MultilinearPolynomial f;
    f.variables = names;
    f.add_term(word, 1);
    MultilinearPolynomial g = f;
    for (const auto& s : sets) g = alternate(g, s);
    if (g.terms.empty()) continue;
    AlternationShape shape;
    shape.small_sets = sets;
    for (int v = nu * r; v < m; ++v) shape.free_vars.push_back(v);
    g.shape = shape;
    if (!is_identity(g, a)) return false;
  } while (std::next_permutation(word.begin(), word.end()));
  return true;
}

KemerEstimate kemer_index_estimate(const StructureAlgebra& a, int nu, long budget,
                                   std::optional<int> exhaustive_extra_vars,
                                   std::uint64_t seed) {
  KemerEstimate est = kemer_lower_bound_search(a, nu, budget, seed);
  if (exhaustive_extra_vars && est.d_lower < est.par.dim_ss) {
    bool all = true;
    for (int r = est.d_lower + 1; r <= est.par.dim_ss && all; ++r)
      all = refute_alternating(a, nu, r, *exhaustive_extra_vars);
    if (all) est.refuted_up_to_extra_vars = exhaustive_extra_vars;
  }
  return est;
}

BasicnessResult basicness_check(const StructureAlgebra& a, std::uint64_t seed) {
  BasicnessResult res;
  res.estimate = kemer_index_estimate(a, 2, 200000, {}, seed);
  res.certified = res.estimate.status == "certified_basic";
  std::string lo = "(" + std::to_string(res.estimate.d_lower) + "," +
                   std::to_string(res.estimate.s_lower) + ")";
  std::string up = "(" + std::to_string(res.estimate.par.dim_ss) + "," +
                   std::to_string(res.estimate.par.s) + ")";
  res.details = res.certified
                    ? "witnessed lower bound " + lo + " meets Par " + up
                    : "witnessed lower bound " + lo + " below Par " + up +
                          "; not certified (search incompleteness, not a disproof)";
  return res;
}

namespace {

nlohmann::json qvec_json(const QVec& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : v) arr.push_back(to_string(c));
  return arr;
}

}  // namespace

std::string kemer_report_json(const StructureAlgebra& a, const KemerEstimate& est,
                              int exp, std::uint64_t seed, long budget) {
  nlohmann::json j;
  j["algebra"] = a.name;
  j["exp"] = exp;
  j["par"] = {est.par.dim_ss, est.par.s};
  j["kemer_lower"] = {est.d_lower, est.s_lower};
  j["status"] = est.status;
  j["nu"] = est.nu;
  j["seed"] = seed;
  j["budget"] = budget;
  if (est.refuted_up_to_extra_vars)
    j["refuted_up_to_extra_vars"] = *est.refuted_up_to_extra_vars;
  nlohmann::json ws = nlohmann::json::array();
  for (const auto& w : est.witnesses) {
    nlohmann::json wj;
    wj["r"] = w.r;
    wj["big_sets"] = w.big_sets;
    wj["nu"] = w.nu;
    wj["block_ids"] = w.family.block_ids;
    wj["block_dims"] = w.family.block_dims;
    wj["mu"] = w.family.mu;
    wj["value"] = qvec_json(w.value);
    if (w.polynomial)
      wj["polynomial"] = nlohmann::json::parse(polynomial_to_json(*w.polynomial));
    else
      wj["polynomial"] = nullptr;
    if (w.named_assignment) {
      nlohmann::json asg;
      for (const auto& [name, v] : *w.named_assignment) asg[name] = qvec_json(v);
      wj["assignment"] = asg;
    } else {
      nlohmann::json asg;
      nlohmann::json xs = nlohmann::json::array(), ys = nlohmann::json::array(),
                     bs = nlohmann::json::array();
      for (const auto& blk : w.assignment.xunits) {
        nlohmann::json b = nlohmann::json::array();
        for (const auto& v : blk) b.push_back(qvec_json(v));
        xs.push_back(b);
      }
      for (const auto& blk : w.assignment.yvals) {
        nlohmann::json b = nlohmann::json::array();
        for (const auto& v : blk) b.push_back(qvec_json(v));
        ys.push_back(b);
      }
      for (const auto& v : w.assignment.bridges) bs.push_back(qvec_json(v));
      asg["xunits"] = xs;
      asg["yvals"] = ys;
      asg["bridges"] = bs;
      wj["assignment"] = asg;
    }
    ws.push_back(wj);
  }
  j["witnesses"] = ws;
  return j.dump(2) + "\n";
}

}  // namespace pialg
