#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pialg/algebra.hpp"
#include "pialg/asymptotics.hpp"
#include "pialg/codim.hpp"
#include "pialg/kemer.hpp"
#include "pialg/multilinear.hpp"
#include "pialg/paths.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace pialg;

int default_workers() {
  const char* env = std::getenv("PIALG_WORKERS");
  if (!env) return 1;
  int w = std::atoi(env);
  return w >= 1 ? w : 1;
}

void write_artifact(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ContractError("cannot open output file: " + out);
  f << content;
}

StructureAlgebra load_algebra(const std::string& builder, const std::string& file) {
  if (!builder.empty() && !file.empty())
    throw ContractError("give either --builder or --file, not both");
  if (!builder.empty()) return build_from_spec(builder);
  if (!file.empty()) {
    std::ifstream f(file);
    if (!f) throw ContractError("cannot open algebra file: " + file);
    std::stringstream ss;
    ss << f.rdbuf();
    return algebra_from_json(ss.str());
  }
  throw ContractError("an algebra source is required (--builder or --file)");
}

std::string source_echo(const std::string& builder, const std::string& file) {
  return builder.empty() ? "file:" + file : "builder:" + builder;
}

// decimal, integer, or p/q literals
Rational parse_number(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) return parse_rational(s);
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  Rational num = parse_rational(digits);
  Rational den = 1;
  for (size_t i = dot + 1; i < s.size(); ++i) den *= 10;
  Rational r = num / den;
  r.canonicalize();
  return r;
}

std::vector<Rational> parse_number_list(const std::string& s) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw ContractError("empty number list");
  return out;
}

nlohmann::json stamp(const std::string& command, const std::string& config,
                     std::uint64_t seed) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  return j;
}

std::string csv_stamp(const std::string& command, const std::string& config,
                      std::uint64_t seed) {
  return "# version=" + std::string(kVersion) + " command=" + command +
         " config=" + config + " seed=" + std::to_string(seed) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PI-algebra invariants, codimension sequences, and conjecture diagnostics"};
  app.require_subcommand(1);

  std::string builder, file, out, format = "csv";
  std::uint64_t seed = 0;
  int workers = default_workers();
  auto add_source = [&](CLI::App* cmd, bool with_workers = true) {
    cmd->add_option("--builder", builder, "builder spec: mat:d | ut:d1,d2 | assoc:dims;r;u | prod:a*b");
    cmd->add_option("--file", file, "algebra JSON file");
    cmd->add_option("--out", out, "output path (default stdout)");
    cmd->add_option("--seed", seed, "random seed");
    if (with_workers) cmd->add_option("--workers", workers, "worker thread count");
  };

  auto* alg = app.add_subcommand("algebra", "build or inspect an algebra");
  alg->require_subcommand(1);
  auto* alg_build = alg->add_subcommand("build", "emit structure constants as JSON");
  add_source(alg_build, false);
  auto* alg_inspect = alg->add_subcommand("inspect", "summarize an algebra");
  add_source(alg_inspect, false);

  int n = 5;
  auto* codim = app.add_subcommand("codim", "codimension sequence");
  add_source(codim);
  codim->add_option("--n", n, "maximal degree");
  codim->add_option("--format", format, "csv or json");

  auto* inv = app.add_subcommand("invariants", "radical, wedderburn, par, exponent");
  add_source(inv);

  int nu = 2;
  long budget = 200000;
  int extra_vars = -1;
  auto* kem = app.add_subcommand("kemer", "kemer index estimate with witnesses");
  add_source(kem);
  kem->add_option("--nu", nu, "small-set count");
  kem->add_option("--budget", budget, "search budget");
  kem->add_option("--exhaustive-extra-vars", extra_vars,
                  "exhaustive refutation variable allowance");

  auto* conj = app.add_subcommand("conjecture", "asymptotic conjecture report");
  add_source(conj);
  conj->add_option("--n", n, "maximal degree");
  conj->add_option("--format", format, "json or csv");

  int max_radical = 1;
  bool flagged = false;
  auto* paths = app.add_subcommand("paths", "path structures and upper-bound series");
  add_source(paths);
  paths->add_option("--s", max_radical, "maximal radical word count");
  paths->add_flag("--flagged", flagged, "include leading/trailing-radical variants");
  paths->add_option("--n", n, "series degree for the bounds CSV");
  paths->add_option("--format", format, "json (structures) or csv (bounds)");

  std::string kstr, rstr, nstr = "100";
  auto* rb = app.add_subcommand("rb", "multinomial sum vs closed form");
  rb->add_option("--k", kstr, "comma-separated positive weights")->required();
  rb->add_option("--r", rstr, "comma-separated exponents")->required();
  rb->add_option("--n", nstr, "comma-separated degrees");
  rb->add_option("--out", out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad usage is a contract violation
  }

  try {
    if (*alg_build) {
      auto a = load_algebra(builder, file);
      write_artifact(out, algebra_to_json(a));
    } else if (*alg_inspect) {
      auto a = load_algebra(builder, file);
      auto j = stamp("algebra inspect", source_echo(builder, file), seed);
      j["name"] = a.name;
      j["dim"] = a.dim;
      j["has_unit"] = a.unit.has_value();
      auto rad = radical(a);
      j["radical_dim"] = rad.dim();
      j["nildeg"] = nilpotency_degree(a, rad);
      if (a.meta) {
        std::vector<int> bd;
        for (const auto& b : a.meta->blocks) bd.push_back(b.d);
        j["blocks"] = bd;
      }
      if (a.assoc) {
        j["assoc"] = {{"block_dims", a.assoc->block_dims},
                      {"r", a.assoc->r},
                      {"u", a.assoc->u},
                      {"words", a.assoc->words.size()}};
      }
      write_artifact(out, j.dump(2) + "\n");
    } else if (*codim) {
      auto a = load_algebra(builder, file);
      auto seq = codim_sequence(a, n, seed, workers);
      std::string config = source_echo(builder, file) + " n=" + std::to_string(n);
      if (format == "json") {
        auto j = stamp("codim", config, seed);
        j["records"] = nlohmann::json::parse(codim_json(seq.records));
        j["nondecreasing_from"] = seq.nondecreasing_from;
        j["eventually_nondecreasing"] = seq.eventually_nondecreasing;
        write_artifact(out, j.dump(2) + "\n");
      } else {
        write_artifact(out, csv_stamp("codim", config, seed) + codim_csv(seq.records));
      }
    } else if (*inv) {
      auto a = load_algebra(builder, file);
      auto wd = wedderburn_data(a, seed);
      auto p = par(a, seed);
      auto j = stamp("invariants", source_echo(builder, file), seed);
      j["name"] = a.name;
      j["dim"] = a.dim;
      j["q"] = wd.q;
      j["block_dims"] = wd.block_dims;
      j["dim_ss"] = wd.dim_ss;
      j["radical_dim"] = wd.radical.dim();
      j["nildeg"] = wd.nildeg;
      j["par"] = {p.dim_ss, p.s};
      j["exp"] = exp_gz(a, seed);
      write_artifact(out, j.dump(2) + "\n");
    } else if (*kem) {
      auto a = load_algebra(builder, file);
      std::optional<int> e;
      if (extra_vars >= 0) e = extra_vars;
      auto est = kemer_index_estimate(a, nu, budget, e, seed);
      int exp = exp_gz(a, seed);
      auto j = nlohmann::json::parse(kemer_report_json(a, est, exp, seed, budget));
      j["version"] = kVersion;
      j["config"] = source_echo(builder, file) + " nu=" + std::to_string(nu);
      write_artifact(out, j.dump(2) + "\n");
    } else if (*conj) {
      auto a = load_algebra(builder, file);
      auto rep = conjecture_report(a, n, seed, workers);
      std::string config = source_echo(builder, file) + " n=" + std::to_string(n);
      if (format == "csv") {
        write_artifact(out, csv_stamp("conjecture", config, seed) +
                                conjecture_report_csv(rep));
      } else {
        auto j = nlohmann::json::parse(conjecture_report_json(rep));
        j["version"] = kVersion;
        j["config"] = config;
        write_artifact(out, j.dump(2) + "\n");
      }
    } else if (*paths) {
      auto a = load_algebra(builder, file);
      std::string config = source_echo(builder, file) + " s=" + std::to_string(max_radical);
      if (format == "csv") {
        CodimSource src = [&](int d, int m) -> Integer {
          auto rec = codimension_modular(build_matrix_algebra(d), m, seed);
          return Integer(std::to_string(rec.c_n));
        };
        write_artifact(out, csv_stamp("paths", config, seed) + upper_bound_csv(a, n, src));
      } else {
        auto structures = enumerate_path_structures(a, max_radical, flagged);
        auto j = stamp("paths", config, seed);
        j["symbols"] = enumerate_symbols(a).size();
        j["structures"] = nlohmann::json::parse(path_structures_json(structures));
        write_artifact(out, j.dump(2) + "\n");
      }
    } else if (*rb) {
      AsymptoticParams p{parse_number_list(kstr), parse_number_list(rstr)};
      std::string lines;
      for (const auto& nv : parse_number_list(nstr)) {
        long nn = static_cast<long>(nv.get_num().get_si());
        Real lhs = regev_beckner_lhs(p, nn);
        Real rhs = regev_beckner_rhs(p, nn);
        Real ratio = lhs / rhs;
        lines += "n=" + std::to_string(nn) + " lhs=" + lhs.str(15) +
                 " rhs=" + rhs.str(15) + " ratio=" + ratio.str(15) + "\n";
      }
      write_artifact(out, csv_stamp("rb", "k=" + kstr + " r=" + rstr, seed) + lines);
    }
  } catch (const ContractError& e) {
    std::cerr << "contract error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
