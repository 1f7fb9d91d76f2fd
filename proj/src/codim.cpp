#include "pialg/codim.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace pialg {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a * b % m;  // operands below 2^31: no overflow in 64 bits
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_probable_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // deterministic for n < 3,215,031,751
  for (std::uint64_t base : {2ull, 3ull, 5ull, 7ull}) {
    std::uint64_t x = powmod(base, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::uint64_t random_prime(std::uint64_t& state) {
  for (;;) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    std::uint64_t cand = (1ull << 30) | (z % (1ull << 30)) | 1ull;
    if (is_probable_prime(cand)) return cand;
  }
}

// ---------------------------------------------------------------------------

namespace {

struct SeqProd {
  std::vector<int> seq;  // basis indices, product nonzero
  SparseVec prod;
};

// All length-n basis-index sequences with nonzero product; prefix products
// prune the tree hard on triangular-flavored algebras.
std::vector<SeqProd> enumerate_nonzero_sequences(const StructureAlgebra& a, int n) {
  std::vector<SeqProd> out;
  std::vector<int> seq(n);
  QVec prod;
  std::function<void(int)> rec = [&](int depth) {
    if (depth == n) {
      SparseVec sp;
      for (int k = 0; k < a.dim; ++k)
        if (prod[k] != 0) sp.push_back({k, prod[k]});
      out.push_back({seq, std::move(sp)});
      return;
    }
    QVec save = prod;
    for (int b = 0; b < a.dim; ++b) {
      prod = depth == 0 ? a.basis_vec(b) : a.mult_basis_right(save, b);
      if (pialg::is_zero(prod)) continue;
      seq[depth] = b;
      rec(depth + 1);
    }
    prod = std::move(save);
  };
  rec(0);
  return out;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

long long checked_cells(const StructureAlgebra& a, int n) {
  long long cells = 1;
  for (int i = 2; i <= n; ++i) {
    cells *= i;
    if (cells > (1ll << 50)) return cells;
  }
  for (int i = 0; i <= n; ++i) {
    cells *= a.dim;
    if (cells > (1ll << 50)) return cells;
  }
  return cells;
}

// Incremental mod-p row reduction; rows generated per permutation, only
// independent rows retained. Column ids are discovered lazily.
unsigned long long modular_rank(const StructureAlgebra& a, int n, std::uint64_t p,
                                const std::vector<SeqProd>& seqs, int workers) {
  if (workers < 1) workers = 1;
  int dim = a.dim;
  std::vector<std::uint64_t> powdim(n);
  powdim[0] = 1;
  for (int i = 1; i < n; ++i) powdim[i] = powdim[i - 1] * dim;

  // per-sequence terms reduced mod p
  struct SeqModTerm {
    std::uint64_t key_base;  // sum s_i * dim^{sigma(i)} resolved per row
    int coord;
    std::uint64_t val;
  };
  std::vector<std::vector<std::pair<int, std::uint64_t>>> seq_terms(seqs.size());
  for (size_t i = 0; i < seqs.size(); ++i)
    for (const auto& t : seqs[i].prod) {
      std::uint64_t v = mod_p(t.c, p);
      if (v) seq_terms[i].push_back({t.k, v});
    }

  std::unordered_map<std::uint64_t, std::uint32_t> colid;
  std::vector<std::vector<std::uint32_t>> pivot_rows;
  std::vector<int> piv_of_col;
  std::vector<std::uint64_t> buf;
  unsigned long long rank = 0;

  using SparseRow = std::vector<std::pair<std::uint64_t, std::uint64_t>>;  // key,val
  auto build_row = [&](const std::vector<int>& sigma, SparseRow& row) {
    row.clear();
    for (size_t i = 0; i < seqs.size(); ++i) {
      if (seq_terms[i].empty()) continue;
      std::uint64_t code = 0;
      const auto& s = seqs[i].seq;
      for (int pos = 0; pos < n; ++pos) code += std::uint64_t(s[pos]) * powdim[sigma[pos]];
      for (const auto& [k, v] : seq_terms[i])
        row.push_back({code * dim + std::uint64_t(k), v});
    }
  };

  auto reduce_row = [&](const SparseRow& row) {
    for (const auto& [key, v] : row) {
      auto it = colid.find(key);
      if (it == colid.end()) {
        colid.emplace(key, static_cast<std::uint32_t>(piv_of_col.size()));
        piv_of_col.push_back(-1);
        buf.push_back(0);
      }
    }
    std::fill(buf.begin(), buf.end(), 0);
    for (const auto& [key, v] : row) {
      std::uint32_t c = colid[key];
      buf[c] = (buf[c] + v) % p;
    }
    size_t ncols = buf.size();
    for (size_t c = 0; c < ncols; ++c) {
      if (buf[c] == 0) continue;
      int pr = piv_of_col[c];
      if (pr < 0) {
        // new pivot: normalize and store
        std::uint64_t inv = powmod(buf[c], p - 2, p);
        std::vector<std::uint32_t> stored(ncols, 0);
        for (size_t i = c; i < ncols; ++i)
          if (buf[i]) stored[i] = static_cast<std::uint32_t>(mulmod(buf[i], inv, p));
        piv_of_col[c] = static_cast<int>(pivot_rows.size());
        pivot_rows.push_back(std::move(stored));
        ++rank;
        return;
      }
      const auto& prow = pivot_rows[pr];
      std::uint64_t f = p - buf[c];
      size_t lim = prow.size();
      for (size_t i = c; i < lim; ++i)
        if (prow[i]) buf[i] = (buf[i] + f * prow[i]) % p;
    }
  };

  // workers pre-build sparse rows in ordered batches; reduction is serial, so
  // the retained set (and the rank) is independent of the worker count
  std::vector<int> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = i;
  const size_t batch = 512;
  bool more = true;
  std::vector<std::vector<int>> perms;
  std::vector<SparseRow> rows;
  while (more) {
    perms.clear();
    for (size_t i = 0; i < batch && more; ++i) {
      perms.push_back(sigma);
      more = std::next_permutation(sigma.begin(), sigma.end());
    }
    rows.assign(perms.size(), {});
    if (workers == 1 || perms.size() < 64) {
      for (size_t i = 0; i < perms.size(); ++i) build_row(perms[i], rows[i]);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          for (size_t i = w; i < perms.size(); i += workers) build_row(perms[i], rows[i]);
        });
      for (auto& t : pool) t.join();
    }
    for (const auto& r : rows) reduce_row(r);
  }
  return rank;
}

}  // namespace

CodimRecord codimension_exact_oracle(const StructureAlgebra& a, int n, long max_cells) {
  if (n < 1) throw ContractError("codimension_exact_oracle: n must be positive");
  auto t0 = std::chrono::steady_clock::now();
  long long cells = checked_cells(a, n);
  if (cells > max_cells)
    throw ContractError("codimension_exact_oracle: budget exceeded (" +
                        std::to_string(cells) + " cells)");
  int dim = a.dim;
  long long ntuples = 1;
  for (int i = 0; i < n; ++i) ntuples *= dim;
  size_t width = static_cast<size_t>(ntuples) * dim;

  Subspace rowspace(nullptr);
  std::vector<int> sigma(n), t(n);
  for (int i = 0; i < n; ++i) sigma[i] = i;
  do {
    QVec row(width, Rational(0));
    for (long long code = 0; code < ntuples; ++code) {
      long long c = code;
      for (int i = 0; i < n; ++i) {
        t[i] = static_cast<int>(c % dim);
        c /= dim;
      }
      QVec prod = a.basis_vec(t[sigma[0]]);
      for (int i = 1; i < n && !pialg::is_zero(prod); ++i)
        prod = a.mult_basis_right(prod, t[sigma[i]]);
      for (int k = 0; k < dim; ++k)
        if (prod[k] != 0) row[static_cast<size_t>(code) * dim + k] = prod[k];
    }
    rowspace.insert(std::move(row));
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  CodimRecord rec;
  rec.n = n;
  rec.c_n = static_cast<unsigned long long>(rowspace.dim());
  rec.method = "exact";
  rec.verified = true;
  rec.wall_time = elapsed_since(t0);
  return rec;
}

CodimRecord codimension_modular(const StructureAlgebra& a, int n, std::uint64_t seed,
                                std::vector<std::uint64_t> primes, int workers) {
  if (n < 1) throw ContractError("codimension_modular: n must be positive");
  auto t0 = std::chrono::steady_clock::now();
  auto seqs = enumerate_nonzero_sequences(a, n);
  std::uint64_t state = seed ^ 0xa5a5a5a5deadbeefull;
  bool user_primes = !primes.empty();
  if (user_primes && primes.size() < 2)
    throw ContractError("codimension_modular: need at least two primes");

  auto next_prime = [&](const std::vector<std::uint64_t>& used) {
    for (int tries = 0; tries < 64; ++tries) {
      std::uint64_t p = random_prime(state);
      if (std::find(used.begin(), used.end(), p) == used.end()) return p;
    }
    throw ContractError("codimension_modular: prime exhaustion");
  };

  std::vector<std::uint64_t> used;
  std::vector<unsigned long long> ranks;
  auto run_prime = [&](std::uint64_t p) {
    used.push_back(p);
    ranks.push_back(modular_rank(a, n, p, seqs, workers));
  };
  for (int i = 0; i < 2; ++i)
    run_prime(user_primes ? primes[i] : next_prime(used));

  CodimRecord rec;
  rec.n = n;
  rec.method = "modular";
  if (ranks[0] == ranks[1]) {
    rec.c_n = ranks[0];
    rec.primes = used;
    rec.verified = true;
    rec.wall_time = elapsed_since(t0);
    return rec;
  }
  // a bad prime only lowers the rank: retry and trust two agreeing maxima
  run_prime(user_primes && primes.size() > 2 ? primes[2] : next_prime(used));
  unsigned long long top = std::max({ranks[0], ranks[1], ranks[2]});
  std::vector<std::uint64_t> agree;
  for (size_t i = 0; i < ranks.size(); ++i)
    if (ranks[i] == top) agree.push_back(used[i]);
  if (agree.size() >= 2) {
    rec.c_n = top;
    rec.primes = agree;
    rec.verified = true;
    rec.wall_time = elapsed_since(t0);
    return rec;
  }
  if (checked_cells(a, n) <= 500000) {
    CodimRecord ex = codimension_exact_oracle(a, n);
    ex.wall_time = elapsed_since(t0);
    return ex;
  }
  throw ContractError("codimension_modular: prime exhaustion");
}

CodimSequence codim_sequence(const StructureAlgebra& a, int max_n, std::uint64_t seed,
                             int workers) {
  if (max_n < 1) throw ContractError("codim_sequence: max_n must be positive");
  CodimSequence out;
  for (int n = 1; n <= max_n; ++n)
    out.records.push_back(
        codimension_modular(a, n, seed * 1000003ull + std::uint64_t(n), {}, workers));
  int m = max_n;
  while (m > 1 && out.records[m - 2].c_n <= out.records[m - 1].c_n) --m;
  out.nondecreasing_from = m;
  out.eventually_nondecreasing = m < max_n;
  return out;
}

namespace {

std::string seconds_field(const CodimRecord& r, bool with_timings) {
  char bufc[32];
  std::snprintf(bufc, sizeof(bufc), "%.3f", with_timings ? r.wall_time : 0.0);
  return bufc;
}

}  // namespace

std::string codim_csv(const std::vector<CodimRecord>& records, bool with_timings) {
  std::string out = "n,c_n,method,primes,verified,seconds\n";
  for (const auto& r : records) {
    out += std::to_string(r.n) + "," + std::to_string(r.c_n) + "," + r.method + ",";
    for (size_t i = 0; i < r.primes.size(); ++i)
      out += (i ? ";" : "") + std::to_string(r.primes[i]);
    out += std::string(",") + (r.verified ? "true" : "false") + "," +
           seconds_field(r, with_timings) + "\n";
  }
  return out;
}

std::string codim_json(const std::vector<CodimRecord>& records, bool with_timings) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["n"] = r.n;
    j["c_n"] = r.c_n;
    j["method"] = r.method;
    j["primes"] = r.primes;
    j["verified"] = r.verified;
    j["seconds"] = with_timings ? r.wall_time : 0.0;
    arr.push_back(j);
  }
  return arr.dump(2);
}

}  // namespace pialg
