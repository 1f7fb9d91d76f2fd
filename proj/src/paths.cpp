#include "pialg/paths.hpp"

#include <algorithm>

#include "json.hpp"

namespace pialg {

int PathStructure::radical_count() const {
  int c = 0;
  for (const auto& s : symbols)
    if (s.kind == PathSymbol::radical_word) ++c;
  return c;
}

namespace {

const AssociatedInfo& assoc_of(const StructureAlgebra& a) {
  if (!a.assoc)
    throw ContractError("path enumeration requires associated-word metadata");
  return *a.assoc;
}

}  // namespace

std::vector<PathSymbol> enumerate_symbols(const StructureAlgebra& acal) {
  const auto& info = assoc_of(acal);
  std::vector<PathSymbol> out;
  int q = static_cast<int>(info.block_dims.size());
  for (int i = 1; i <= q; ++i) out.push_back({PathSymbol::sim_comp, i});
  for (int w = 0; w < static_cast<int>(info.words.size()); ++w)
    out.push_back({PathSymbol::radical_word, w});
  return out;
}

std::vector<PathStructure> enumerate_path_structures(const StructureAlgebra& acal,
                                                     int max_radical,
                                                     bool include_flagged) {
  if (max_radical < 0) throw ContractError("enumerate_path_structures: negative bound");
  const auto& info = assoc_of(acal);
  int q = static_cast<int>(info.block_dims.size());
  int nw = static_cast<int>(info.words.size());
  std::vector<PathStructure> out;

  // core shapes: s'+1 components interleaved with s' words
  std::function<void(PathStructure&, int, int)> grow = [&](PathStructure& ps,
                                                           int comps_left,
                                                           int words_left) {
    if (comps_left == 0) {
      out.push_back(ps);
      return;
    }
    (void)words_left;
    for (int k = 1; k <= q; ++k) {
      ps.symbols.push_back({PathSymbol::sim_comp, k});
      if (comps_left == 1) {
        grow(ps, 0, 0);
      } else {
        for (int w = 0; w < nw; ++w) {
          ps.symbols.push_back({PathSymbol::radical_word, w});
          grow(ps, comps_left - 1, words_left - 1);
          ps.symbols.pop_back();
        }
      }
      ps.symbols.pop_back();
    }
  };
  for (int sp = 0; sp <= max_radical; ++sp) {
    if (nw == 0 && sp > 0) break;
    PathStructure ps;
    grow(ps, sp + 1, sp);
  }

  if (include_flagged) {
    size_t core = out.size();
    std::vector<PathStructure> flagged;
    // a bare radical word
    if (max_radical >= 1)
      for (int w = 0; w < nw; ++w) {
        PathStructure ps;
        ps.symbols.push_back({PathSymbol::radical_word, w});
        ps.leading_radical = ps.trailing_radical = true;
        flagged.push_back(std::move(ps));
      }
    for (size_t i = 0; i < core; ++i)
      for (int mode = 1; mode <= 3; ++mode) {
        bool lead = mode & 1, trail = mode & 2;
        int extra = (lead ? 1 : 0) + (trail ? 1 : 0);
        if (out[i].radical_count() + extra > max_radical) continue;
        for (int wl = 0; wl < (lead ? nw : 1); ++wl)
          for (int wt = 0; wt < (trail ? nw : 1); ++wt) {
            PathStructure ps;
            if (lead) ps.symbols.push_back({PathSymbol::radical_word, wl});
            ps.symbols.insert(ps.symbols.end(), out[i].symbols.begin(),
                              out[i].symbols.end());
            if (trail) ps.symbols.push_back({PathSymbol::radical_word, wt});
            ps.leading_radical = lead;
            ps.trailing_radical = trail;
            flagged.push_back(std::move(ps));
          }
      }
    out.insert(out.end(), flagged.begin(), flagged.end());
  }

  std::sort(out.begin(), out.end(), [](const PathStructure& a, const PathStructure& b) {
    if (a.symbols.size() != b.symbols.size())
      return a.symbols.size() < b.symbols.size();
    if (a.symbols != b.symbols) return a.symbols < b.symbols;
    return std::make_pair(a.leading_radical, a.trailing_radical) <
           std::make_pair(b.leading_radical, b.trailing_radical);
  });
  return out;
}

Integer path_count_bound(int symb_count, int s) {
  if (symb_count < 1 || s < 0) throw ContractError("path_count_bound: bad inputs");
  Integer total = 0, p = 1;
  for (int t = 1; t <= 2 * s + 1; ++t) {
    p *= symb_count;
    total += p;
  }
  return total;
}

namespace {

Integer multinomial(int n, const std::vector<int>& parts) {
  Integer out = 1;
  int left = n;
  for (int p : parts) {
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(left),
                 static_cast<unsigned long>(p));
    out *= b;
    left -= p;
  }
  return out;
}

Integer ipow(int base, int e) {
  Integer out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

Integer monomial_class_bound(int n, const std::vector<int>& parts, int s_prime) {
  if (n < 1 || s_prime < 0 || s_prime > n)
    throw ContractError("monomial_class_bound: bad inputs");
  int sum = 0;
  for (int p : parts) {
    if (p < 0) throw ContractError("monomial_class_bound: negative part");
    sum += p;
  }
  if (sum != n - s_prime)
    throw ContractError("monomial_class_bound: parts must sum to n - s'");
  return ipow(n, s_prime) * multinomial(n - s_prime, parts);
}

Integer upper_bound_series(const StructureAlgebra& acal, int n,
                           const CodimSource& codim_source) {
  if (n < 1) throw ContractError("upper_bound_series: n must be positive");
  const auto& info = assoc_of(acal);
  int q = static_cast<int>(info.block_dims.size());
  int s = info.u;  // radical words truncate at length u
  auto c = [&](int i, int m) -> Integer {
    if (m == 0) return 1;
    Integer v = codim_source(info.block_dims[i], m);
    if (v < 0) throw ContractError("upper_bound_series: missing codimension value");
    return v;
  };
  Integer total = 0;
  for (int sp = 0; sp <= s && sp <= n; ++sp) {
    int m = n - sp;
    Integer inner = 0;
    std::vector<int> parts(q);
    std::function<void(int, int, Integer)> rec = [&](int i, int left, Integer prod) {
      if (i == q - 1) {
        parts[i] = left;
        inner += multinomial(m, parts) * prod * c(i, left);
        return;
      }
      for (int ni = 0; ni <= left; ++ni) {
        parts[i] = ni;
        rec(i + 1, left - ni, prod * c(i, ni));
      }
    };
    rec(0, m, Integer(1));
    total += ipow(n, sp) * inner;
  }
  return total;
}

std::string path_structures_json(const std::vector<PathStructure>& structures) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& ps : structures) {
    nlohmann::json j;
    nlohmann::json syms = nlohmann::json::array();
    for (const auto& s : ps.symbols)
      syms.push_back({{"kind", s.kind == PathSymbol::sim_comp ? "sim_comp"
                                                              : "radical_word"},
                      {"index", s.index}});
    j["symbols"] = syms;
    j["leading_radical"] = ps.leading_radical;
    j["trailing_radical"] = ps.trailing_radical;
    j["radical_count"] = ps.radical_count();
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::string upper_bound_csv(const StructureAlgebra& acal, int max_n,
                            const CodimSource& codim_source) {
  std::string out = "n,upper_bound\n";
  for (int n = 1; n <= max_n; ++n)
    out += std::to_string(n) + "," + upper_bound_series(acal, n, codim_source).get_str() +
           "\n";
  return out;
}

}  // namespace pialg
