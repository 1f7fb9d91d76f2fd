#include "pialg/multilinear.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <thread>

#include "json.hpp"

namespace pialg {

namespace {

int perm_sign(const std::vector<int>& p) {
  int inv = 0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

}  // namespace

std::vector<std::vector<int>> AlternationShape::all_sets() const {
  std::vector<std::vector<int>> out = small_sets;
  out.insert(out.end(), big_sets.begin(), big_sets.end());
  return out;
}

int MultilinearPolynomial::var_index(const std::string& name) const {
  for (int i = 0; i < nvars(); ++i)
    if (variables[i] == name) return i;
  return -1;
}

void MultilinearPolynomial::add_term(Word w, Rational c) {
  if (c == 0) return;
  auto it = terms.find(w);
  if (it == terms.end()) {
    terms.emplace(std::move(w), std::move(c));
  } else {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

MultilinearPolynomial alternate(const MultilinearPolynomial& f,
                                const std::vector<int>& set, long max_terms) {
  std::vector<int> s = set;
  std::sort(s.begin(), s.end());
  for (int v : s)
    if (v < 0 || v >= f.nvars()) throw ContractError("alternate: variable out of range");
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw ContractError("alternate: duplicate variable in set");
  int m = static_cast<int>(s.size());
  long fact = 1;
  for (int i = 2; i <= m; ++i) fact *= i;
  if (static_cast<long>(f.terms.size()) > max_terms / std::max(fact, 1L))
    throw ContractError("alternate: term budget exceeded");

  MultilinearPolynomial out;
  out.variables = f.variables;
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  std::vector<int> image(f.nvars());
  do {
    int sign = perm_sign(perm);
    for (int v = 0; v < f.nvars(); ++v) image[v] = v;
    for (int i = 0; i < m; ++i) image[s[i]] = s[perm[i]];
    for (const auto& [w, c] : f.terms) {
      Word nw(w.size());
      for (size_t p = 0; p < w.size(); ++p) nw[p] = image[w[p]];
      out.add_term(std::move(nw), sign > 0 ? c : -c);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool is_alternating_in(const MultilinearPolynomial& f, const std::vector<int>& set) {
  std::vector<int> s = set;
  std::sort(s.begin(), s.end());
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    int a = s[i], b = s[i + 1];
    for (const auto& [w, c] : f.terms) {
      Word sw = w;
      for (auto& v : sw) v = v == a ? b : (v == b ? a : v);
      auto it = f.terms.find(sw);
      if (it == f.terms.end() || it->second != -c) return false;
    }
  }
  return true;
}

MultilinearPolynomial capelli(int n) {
  if (n < 1) throw ContractError("capelli: n must be positive");
  MultilinearPolynomial f;
  for (int i = 1; i <= n; ++i) f.variables.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n + 1; ++i) f.variables.push_back("y" + std::to_string(i));
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  do {
    Word w;
    w.reserve(2 * n + 1);
    for (int i = 0; i < n; ++i) {
      w.push_back(n + i);        // y_{i+1}
      w.push_back(perm[i]);      // x_{perm(i)+1}
    }
    w.push_back(2 * n);          // y_{n+1}
    f.add_term(std::move(w), Rational(perm_sign(perm)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  AlternationShape shape;
  std::vector<int> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = i;
  shape.small_sets.push_back(xs);
  for (int i = n; i <= 2 * n; ++i) shape.free_vars.push_back(i);
  f.shape = std::move(shape);
  return f;
}

MultilinearPolynomial concat_product(const MultilinearPolynomial& a,
                                     const MultilinearPolynomial& b) {
  MultilinearPolynomial out;
  out.variables = a.variables;
  for (const auto& v : b.variables) {
    if (a.var_index(v) >= 0) throw ContractError("concat_product: shared variable " + v);
    out.variables.push_back(v);
  }
  int off = a.nvars();
  for (const auto& [wa, ca] : a.terms)
    for (const auto& [wb, cb] : b.terms) {
      Word w = wa;
      for (int v : wb) w.push_back(v + off);
      out.add_term(std::move(w), ca * cb);
    }
  return out;
}

namespace {

MultilinearPolynomial rename_vars(MultilinearPolynomial f,
                                  const std::vector<std::string>& names) {
  if (names.size() != f.variables.size())
    throw ContractError("rename_vars: arity mismatch");
  f.variables = names;
  return f;
}

MultilinearPolynomial single_var(const std::string& name) {
  MultilinearPolynomial f;
  f.variables.push_back(name);
  f.add_term({0}, Rational(1));
  return f;
}

}  // namespace

MultilinearPolynomial capelli_product_bridged(const std::vector<int>& block_dims,
                                              int mu) {
  if (block_dims.empty() || mu < 1)
    throw ContractError("capelli_product_bridged: bad parameters");
  int q = static_cast<int>(block_dims.size());
  MultilinearPolynomial out;
  bool first = true;
  for (int i = 1; i <= q; ++i) {
    int m = block_dims[i - 1] * block_dims[i - 1];
    for (int j = 1; j <= mu; ++j) {
      std::vector<std::string> names;
      std::string tag = std::to_string(i) + "_" + std::to_string(j) + "_";
      for (int k = 1; k <= m; ++k) names.push_back("x_" + tag + std::to_string(k));
      for (int k = 1; k <= m + 1; ++k) names.push_back("y_" + tag + std::to_string(k));
      MultilinearPolynomial cap = rename_vars(capelli(m), names);
      cap.shape.reset();
      out = first ? std::move(cap) : concat_product(out, cap);
      first = false;
    }
    if (i < q) out = concat_product(out, single_var("w_" + std::to_string(i)));
  }
  AlternationShape shape;
  std::set<int> constrained;
  for (int i = 1; i <= q; ++i) {
    int m = block_dims[i - 1] * block_dims[i - 1];
    for (int j = 1; j <= mu; ++j) {
      std::vector<int> xs;
      for (int k = 1; k <= m; ++k) {
        int idx = out.var_index("x_" + std::to_string(i) + "_" + std::to_string(j) +
                                "_" + std::to_string(k));
        xs.push_back(idx);
        constrained.insert(idx);
      }
      shape.small_sets.push_back(std::move(xs));
    }
  }
  for (int v = 0; v < out.nvars(); ++v)
    if (!constrained.count(v)) shape.free_vars.push_back(v);
  out.shape = std::move(shape);
  return out;
}

UtKemerResult ut_kemer_polynomial(const std::vector<int>& block_dims, int mu,
                                  long max_terms) {
  int q = static_cast<int>(block_dims.size());
  if (mu < q - 1) throw ContractError("ut_kemer_polynomial: mu must be >= q-1");
  MultilinearPolynomial p = capelli_product_bridged(block_dims, mu);
  // X_j: union over blocks of the j-th x-family
  std::vector<std::vector<int>> xsets(mu);
  for (int i = 1; i <= q; ++i) {
    int m = block_dims[i - 1] * block_dims[i - 1];
    for (int j = 1; j <= mu; ++j)
      for (int k = 1; k <= m; ++k)
        xsets[j - 1].push_back(p.var_index("x_" + std::to_string(i) + "_" +
                                           std::to_string(j) + "_" +
                                           std::to_string(k)));
  }
  UtKemerResult res;
  MultilinearPolynomial f1 = p;
  for (int j = 0; j < mu; ++j) f1 = alternate(f1, xsets[j], max_terms);
  MultilinearPolynomial f2 = f1;
  AlternationShape shape;
  for (int j = 0; j < q - 1; ++j) {
    std::vector<int> big = xsets[j];
    big.push_back(p.var_index("w_" + std::to_string(j + 1)));
    f2 = alternate(f2, big, max_terms);
    shape.big_sets.push_back(std::move(big));
  }
  for (int j = q - 1; j < mu; ++j) shape.small_sets.push_back(xsets[j]);
  std::set<int> constrained;
  for (const auto& s : shape.all_sets()) constrained.insert(s.begin(), s.end());
  for (int v = 0; v < p.nvars(); ++v)
    if (!constrained.count(v)) shape.free_vars.push_back(v);
  {
    AlternationShape s1;
    s1.small_sets = xsets;
    std::set<int> c1;
    for (const auto& s : xsets) c1.insert(s.begin(), s.end());
    for (int v = 0; v < p.nvars(); ++v)
      if (!c1.count(v)) s1.free_vars.push_back(v);
    f1.shape = std::move(s1);
  }
  f2.shape = shape;
  res.shape = std::move(shape);
  res.f1 = std::move(f1);
  res.f2 = std::move(f2);
  return res;
}

QVec evaluate(const MultilinearPolynomial& f, const StructureAlgebra& a,
              const Assignment& assignment) {
  std::vector<const QVec*> vals(f.nvars());
  for (int v = 0; v < f.nvars(); ++v) {
    auto it = assignment.find(f.variables[v]);
    if (it == assignment.end())
      throw ContractError("evaluate: missing assignment for " + f.variables[v]);
    if (static_cast<int>(it->second.size()) != a.dim)
      throw ContractError("evaluate: value dimension mismatch");
    vals[v] = &it->second;
  }
  QVec acc(a.dim, Rational(0));
  for (const auto& [w, c] : f.terms) {
    QVec prod = *vals[w[0]];
    for (size_t p = 1; p < w.size() && !pialg::is_zero(prod); ++p)
      prod = a.multiply(prod, *vals[w[p]]);
    for (int k = 0; k < a.dim; ++k)
      if (prod[k] != 0) acc[k] += c * prod[k];
  }
  return acc;
}

namespace {

// Basis-tuple evaluation: tuple[v] is the basis index assigned to variable v.
QVec eval_tuple(const MultilinearPolynomial& f, const StructureAlgebra& a,
                const std::vector<int>& tuple) {
  QVec acc(a.dim, Rational(0));
  for (const auto& [w, c] : f.terms) {
    QVec prod = a.basis_vec(tuple[w[0]]);
    for (size_t p = 1; p < w.size() && !pialg::is_zero(prod); ++p)
      prod = a.mult_basis_right(prod, tuple[w[p]]);
    for (int k = 0; k < a.dim; ++k)
      if (prod[k] != 0) acc[k] += c * prod[k];
  }
  return acc;
}

// set_of[v] >= 0 marks membership in a verified alternating set; tuples that
// repeat a basis element inside one set vanish and are pruned.
struct TupleSearch {
  const MultilinearPolynomial& f;
  const StructureAlgebra& a;
  std::vector<int> set_of;
  std::vector<int> order;  // variable positions, alternating sets first
  long budget = -1;        // evaluations allowed; negative = unlimited
  long used = 0;

  // Visits basis tuples; fn returns true to stop. Returns true when stopped.
  template <typename Fn>
  bool dfs(std::vector<int>& tuple, size_t depth, Fn&& fn) {
    if (depth == order.size()) {
      if (budget >= 0 && used >= budget) return true;
      ++used;
      return fn(tuple);
    }
    int v = order[depth];
    for (int b = 0; b < a.dim; ++b) {
      if (set_of[v] >= 0) {
        bool dup = false;
        for (size_t d2 = 0; d2 < depth && !dup; ++d2)
          if (set_of[order[d2]] == set_of[v] && tuple[order[d2]] == b) dup = true;
        if (dup) continue;
      }
      tuple[v] = b;
      if (dfs(tuple, depth + 1, fn)) return true;
    }
    return false;
  }
};

TupleSearch make_search(const MultilinearPolynomial& f, const StructureAlgebra& a) {
  TupleSearch ts{f, a};
  ts.set_of.assign(f.nvars(), -1);
  if (f.shape) {
    int sid = 0;
    for (const auto& s : f.shape->all_sets()) {
      if (is_alternating_in(f, s))
        for (int v : s) ts.set_of[v] = sid;
      ++sid;
    }
  }
  for (int v = 0; v < f.nvars(); ++v)
    if (ts.set_of[v] >= 0) ts.order.push_back(v);
  for (int v = 0; v < f.nvars(); ++v)
    if (ts.set_of[v] < 0) ts.order.push_back(v);
  return ts;
}

}  // namespace

bool is_identity(const MultilinearPolynomial& f, const StructureAlgebra& a,
                 int workers) {
  if (f.terms.empty()) return true;
  if (workers < 1) workers = 1;
  TupleSearch proto = make_search(f, a);
  int first = proto.order[0];
  std::vector<char> found(std::max(workers, 1), 0);
  auto run = [&](int w) {
    TupleSearch ts = proto;
    std::vector<int> tuple(f.nvars(), 0);
    for (int b = w; b < a.dim; b += workers) {
      tuple[first] = b;
      bool dup_ok = true;  // first position never duplicates
      (void)dup_ok;
      if (ts.dfs(tuple, 1, [&](const std::vector<int>& t) {
            return !pialg::is_zero(eval_tuple(f, a, t));
          })) {
        found[w] = 1;
        return;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (char c : found)
    if (c) return false;
  return true;
}

std::vector<std::pair<int, int>> eulerian_unit_order(int d) {
  // Hierholzer on the complete digraph with loops: every vertex has in- and
  // out-degree d, so a closed Eulerian circuit exists.
  std::vector<int> next_edge(d, 0);
  std::vector<int> stack{0};
  std::vector<int> circuit;
  while (!stack.empty()) {
    int v = stack.back();
    if (next_edge[v] < d) {
      stack.push_back(next_edge[v]++);
    } else {
      circuit.push_back(v);
      stack.pop_back();
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  std::vector<std::pair<int, int>> edges;
  for (size_t i = 0; i + 1 < circuit.size(); ++i)
    edges.push_back({circuit[i], circuit[i + 1]});
  if (static_cast<int>(edges.size()) != d * d)
    throw ContractError("eulerian_unit_order: circuit construction failed");
  return edges;
}

namespace {

// Capelli on one full matrix block: x's walk an Eulerian circuit, y's pin the
// rows, leaving exactly one surviving permutation with a diagonal-unit value.
std::optional<Assignment> capelli_snake(const MultilinearPolynomial& f,
                                        const StructureAlgebra& a) {
  int m = (f.nvars() - 1) / 2;
  if (f.nvars() != 2 * m + 1 || m < 1) return std::nullopt;
  for (int i = 1; i <= m; ++i)
    if (f.variables[i - 1] != "x" + std::to_string(i)) return std::nullopt;
  for (int i = 1; i <= m + 1; ++i)
    if (f.variables[m + i - 1] != "y" + std::to_string(i)) return std::nullopt;
  if (!a.meta || a.meta->blocks.size() != 1) return std::nullopt;
  int d = a.meta->blocks[0].d;
  if (d * d != m) return std::nullopt;
  const auto& un = a.meta->blocks[0].unit;
  auto edges = eulerian_unit_order(d);
  Assignment asg;
  for (int k = 0; k < m; ++k)
    asg["x" + std::to_string(k + 1)] = a.basis_vec(un[edges[k].first][edges[k].second]);
  for (int k = 0; k < m; ++k)
    asg["y" + std::to_string(k + 1)] = a.basis_vec(un[edges[k].first][edges[k].first]);
  asg["y" + std::to_string(m + 1)] =
      a.basis_vec(un[edges[m - 1].second][edges[m - 1].second]);
  if (pialg::is_zero(evaluate(f, a, asg))) return std::nullopt;
  return asg;
}

}  // namespace

std::optional<Assignment> find_nonzero_evaluation(const MultilinearPolynomial& f,
                                                  const StructureAlgebra& a,
                                                  const SearchStrategy& strategy) {
  if (f.terms.empty()) return std::nullopt;
  if (strategy.kind == SearchStrategy::structured) {
    if (auto snake = capelli_snake(f, a)) return snake;
    TupleSearch ts = make_search(f, a);
    ts.budget = strategy.budget;
    std::vector<int> tuple(f.nvars(), 0);
    std::optional<Assignment> hit;
    ts.dfs(tuple, 0, [&](const std::vector<int>& t) {
      if (pialg::is_zero(eval_tuple(f, a, t))) return false;
      Assignment asg;
      for (int v = 0; v < f.nvars(); ++v) asg[f.variables[v]] = a.basis_vec(t[v]);
      hit = std::move(asg);
      return true;
    });
    return hit;
  }
  std::mt19937_64 rng(strategy.seed);
  std::vector<int> tuple(f.nvars());
  for (long trial = 0; trial < strategy.budget; ++trial) {
    for (auto& t : tuple) t = static_cast<int>(rng() % a.dim);
    if (!pialg::is_zero(eval_tuple(f, a, tuple))) {
      Assignment asg;
      for (int v = 0; v < f.nvars(); ++v) asg[f.variables[v]] = a.basis_vec(tuple[v]);
      return asg;
    }
  }
  return std::nullopt;
}

std::string polynomial_to_json(const MultilinearPolynomial& f) {
  nlohmann::json j;
  j["variables"] = f.variables;
  std::vector<nlohmann::json> terms;
  for (const auto& [w, c] : f.terms) {
    std::vector<std::string> word;
    for (int v : w) word.push_back(f.variables[v]);
    terms.push_back({{"word", word}, {"coeff", to_string(c)}});
  }
  j["terms"] = terms;
  return j.dump(2);
}

MultilinearPolynomial polynomial_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MultilinearPolynomial f;
  f.variables = j.at("variables").get<std::vector<std::string>>();
  for (const auto& t : j.at("terms")) {
    Word w;
    for (const auto& name : t.at("word")) {
      int idx = f.var_index(name.get<std::string>());
      if (idx < 0) throw ContractError("polynomial_from_json: unknown variable");
      w.push_back(idx);
    }
    if (w.size() != f.variables.size())
      throw ContractError("polynomial_from_json: word is not a permutation");
    f.add_term(std::move(w), parse_rational(t.at("coeff").get<std::string>()));
  }
  return f;
}

}  // namespace pialg
