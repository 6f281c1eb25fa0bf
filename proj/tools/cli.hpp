#pragma once

// Subcommand dispatcher for the llab binary.
//
// Output formats: text (terse, for terminals), csv (first line "# llab <config
// json>", then a header row), json (an object whose "config" field holds the
// same config). Exit codes: 0 success, 1 reproduction gate failed, 2 usage or
// parameter error.

#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "llab/correlation.hpp"
#include "llab/cubic.hpp"
#include "llab/funceq.hpp"
#include "llab/pell.hpp"
#include "llab/search.hpp"
#include "llab/sign_cache.hpp"

namespace llab::cli {

using json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kGateFailed = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Output {
  Table table;
  json extra = json::object();   // additional JSON fields next to the rows
  std::optional<json> payload;   // replaces columns/rows in JSON output
  std::string text;              // text-format override
  int status = kOk;
};

struct Context {
  u64 seed = kDefaultSeed;
  unsigned threads = 1;
};

struct Command {
  CLI::App* app = nullptr;
  std::string path;  // "search cubic-table"
  std::vector<std::pair<std::string, std::function<json()>>> params;
  std::vector<std::string> required;
  std::function<Output(const Context&)> run;

  template <class T>
  void opt(const std::string& name, T& var, const std::string& desc, bool is_required = false) {
    app->add_option("--" + name, var, desc);
    params.emplace_back(name, [&var] { return json(var); });
    if (is_required) required.push_back(name);
  }
  void flag(const std::string& name, bool& var, const std::string& desc) {
    app->add_flag("--" + name, var, desc);
    params.emplace_back(name, [&var] { return json(var); });
  }
};

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

inline json big(const BigInt& v) { return v.str(); }

inline BigInt parse_big(const std::string& flag, const std::string& s) {
  try {
    if (s.empty()) throw std::runtime_error("empty");
    return BigInt(s);
  } catch (const std::exception&) {
    throw UsageError("--" + flag + ": '" + s + "' is not an integer");
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

inline std::vector<i64> parse_int_list(const std::string& flag, const std::string& s) {
  std::vector<i64> out;
  for (const auto& part : split(s, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError("--" + flag + ": '" + part + "' is not an integer");
    }
  }
  return out;
}

inline std::vector<IntPolynomial> parse_factor_list(const std::string& s) {
  std::vector<IntPolynomial> out;
  if (s.empty()) return out;
  for (const auto& part : split(s, ';')) out.push_back(parse_polynomial(part));
  return out;
}

inline PrimeFunction load_function(const std::string& name, const std::string& file) {
  if (file.empty()) return parse_function_name(name);
  std::ifstream in(file);
  if (!in) throw UsageError("--fn-file: cannot open '" + file + "'");
  return load_multfn(in, file);
}

inline MultFn require_multfn(const PrimeFunction& f) {
  if (const auto* g = std::get_if<MultFn>(&f)) return *g;
  throw UsageError("--fn: this command needs a function with values in the roots of unity");
}

inline std::string sign_string(const PsiTable& psi) {
  std::string s;
  for (auto v : psi.values) s.push_back(v > 0 ? '+' : '-');
  return s;
}

inline json optional_json(const std::optional<u64>& v) { return v ? json(*v) : json(nullptr); }

/// Exponent of g(n) in Z_order, factoring with the run seed.
inline std::uint32_t multfn_exponent(const MultFn& g, const BigInt& n, u64 seed) {
  if (n == 0) return 0;
  u64 acc = 0;
  for (const auto& f : factorize(n, seed).factors)
    acc = (acc + static_cast<u64>(f.exponent) % g.order() * g.exponent_at_prime(f.prime)) % g.order();
  return static_cast<std::uint32_t>(acc);
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

inline std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  return v.dump();
}

inline void render(std::ostream& out, const std::string& format, const json& config, const Output& o) {
  if (format == "json") {
    json doc = json::object();
    doc["config"] = config;
    if (o.payload) {
      for (const auto& [k, v] : o.payload->items()) doc[k] = v;
    } else {
      doc["columns"] = o.table.columns;
      json rows = json::array();
      for (const auto& row : o.table.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[o.table.columns[i]] = row[i];
        rows.push_back(std::move(obj));
      }
      doc["rows"] = std::move(rows);
      for (const auto& [k, v] : o.extra.items()) doc[k] = v;
    }
    out << doc.dump(2) << '\n';
    return;
  }
  if (format == "csv") {
    out << "# llab " << config.dump() << '\n';
    for (std::size_t i = 0; i < o.table.columns.size(); ++i) out << (i ? "," : "") << o.table.columns[i];
    out << '\n';
    for (const auto& row : o.table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
      out << '\n';
    }
    return;
  }
  if (!o.text.empty()) {
    out << o.text << '\n';
    return;
  }
  for (std::size_t i = 0; i < o.table.columns.size(); ++i) out << (i ? " " : "") << o.table.columns[i];
  out << '\n';
  for (const auto& row : o.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << (row[i].is_null() ? "-" : csv_cell(row[i]));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

class Registry {
 public:
  Command& add(CLI::App* parent, const std::string& name, const std::string& desc, const std::string& path) {
    auto& c = commands_.emplace_back();
    c.app = parent->add_subcommand(name, desc);
    c.path = path;
    return c;
  }
  std::deque<Command>& commands() { return commands_; }

 private:
  std::deque<Command> commands_;
};

inline void add_lambda(Registry& reg, CLI::App& app) {
  struct V {
    std::string n, fn = "liouville", fn_file;
  };
  auto v = std::make_shared<V>();
  auto& c = reg.add(&app, "lambda", "Evaluate lambda(n) or another completely multiplicative function", "lambda");
  c.opt("n", v->n, "Integer argument", true);
  c.opt("fn", v->fn, "liouville | omega-mod:<q> | jacobi:<q> | one");
  c.opt("fn-file", v->fn_file, "File with 'order', 'default' and '<prime> <exponent>' lines");
  c.run = [v](const Context& ctx) {
    const BigInt n = parse_big("n", v->n);
    const auto f = load_function(v->fn, v->fn_file);
    Output o;
    if (const auto* g = std::get_if<MultFn>(&f)) {
      const auto e = multfn_exponent(*g, n, ctx.seed);
      if (g->order() == 2) {
        const int s = e == 0 ? 1 : -1;
        o.table = {{"n", "value"}, {{big(n), s}}};
        o.text = std::to_string(s);
      } else {
        o.table = {{"n", "exponent", "order"}, {{big(n), e, g->order()}}};
        o.text = std::to_string(e) + "/" + std::to_string(g->order());
      }
    } else {
      const int s = std::get<RealCharacter>(f)(n);
      o.table = {{"n", "value"}, {{big(n), s}}};
      o.text = std::to_string(s);
    }
    return o;
  };
}

inline void add_sieve(Registry& reg, CLI::App& app) {
  struct V {
    std::string poly = "x", factors, cache;
    i64 a = 1, b = 0;
    bool rle = false, verify = false;
  };
  auto v = std::make_shared<V>();
  auto& c = reg.add(&app, "sieve", "lambda(P(n)) for a <= n <= b", "sieve");
  c.opt("poly", v->poly, "Polynomial, e.g. x^2+1 or 1,0,1");
  c.opt("a", v->a, "First n");
  c.opt("b", v->b, "Last n", true);
  c.opt("factors", v->factors, "Declared factorization, ';'-separated");
  c.opt("cache", v->cache, "Also write the signs to this binary cache file");
  c.flag("rle", v->rle, "Text output is the run-length encoded sign string");
  c.flag("verify", v->verify, "Primality-check every sieve residual");
  c.run = [v](const Context& ctx) {
    const auto p = parse_polynomial(v->poly);
    const auto factors = parse_factor_list(v->factors);
    const auto signs = lambda_poly_range(p, v->a, v->b, factors, SieveOptions{ctx.threads, v->verify});
    if (!v->cache.empty()) {
      std::ofstream file(v->cache, std::ios::binary);
      if (!file) throw UsageError("--cache: cannot write '" + v->cache + "'");
      write_sign_cache(file, SignSequence{v->a, signs});
    }
    Output o;
    o.table.columns = {"n", "P_of_n", "lambda"};
    for (std::size_t i = 0; i < signs.size(); ++i) {
      const i64 n = v->a + static_cast<i64>(i);
      o.table.rows.push_back({n, big(p(BigInt(n))), signs[i]});
    }
    if (v->rle) {
      o.text = rle_signs(signs);
      o.extra["rle"] = o.text;
    }
    return o;
  };
}

inline void add_smooth(Registry& reg, CLI::App& app) {
  struct V {
    std::string poly;
    u64 q = 1, b = 1, x = 0;
  };
  auto v = std::make_shared<V>();
  auto& c = reg.add(&app, "smooth", "Share of n <= X, n = b (mod q), with P(n) n-smooth", "smooth");
  c.opt("poly", v->poly, "Polynomial", true);
  c.opt("q", v->q, "Modulus");
  c.opt("b", v->b, "Residue class, 1 <= b <= q");
  c.opt("x", v->x, "Upper bound X", true);
  c.run = [v](const Context&) {
    const auto f = property_s_density(parse_polynomial(v->poly), v->q, v->b, v->x);
    Output o;
    o.table = {{"q", "b", "x", "count", "density"}, {{v->q, v->b, v->x, f.num, f.value()}}};
    o.text = std::to_string(f.num) + "/" + std::to_string(f.den);
    return o;
  };
}

inline void add_funceq(Registry& reg, CLI::App& app) {
  auto* group = app.add_subcommand("funceq", "Functional equation on Z_q and related tools");
  group->require_subcommand(1);

  {
    struct V {
      u64 q = 1;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "enum", "All solutions psi with psi(0) = +1", "funceq enum");
    c.opt("q", v->q, "Modulus (<= 24)", true);
    c.run = [v](const Context&) {
      const auto sols = enumerate_solutions(v->q);
      Output o;
      o.table.columns = {"psi", "primitive", "induced_from", "character_q", "r", "sign"};
      json list = json::array();
      for (const auto& s : sols) {
        json values = json::array();
        for (auto x : s.psi.values) values.push_back(static_cast<int>(x));
        const json cq = s.character ? json(s.character->character_q) : json(nullptr);
        const json r = s.character ? json(s.character->r) : json(nullptr);
        const json sg = s.character ? json(s.character->sign) : json(nullptr);
        list.push_back({{"values", values},
                        {"primitive", s.primitive},
                        {"induced_from", s.induced_from},
                        {"character_q", cq},
                        {"r", r},
                        {"sign", sg}});
        o.table.rows.push_back({sign_string(s.psi), s.primitive, s.induced_from, cq, r, sg});
      }
      o.payload = json{{"q", v->q}, {"solutions", list}};
      return o;
    };
  }
  {
    struct V {
      std::string table;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "classify", "Check and classify one psi table", "funceq classify");
    c.opt("table", v->table, "Signs psi(0..q-1), e.g. \"+,-,-\"", true);
    c.run = [v](const Context&) {
      PsiTable psi;
      for (const auto& s : split(v->table, ',')) {
        if (s != "+" && s != "-" && s != "1" && s != "-1" && s != "+1")
          throw UsageError("--table: bad entry '" + s + "'");
        psi.values.push_back(s[0] == '-' ? -1 : 1);
      }
      psi.q = psi.values.size();
      if (psi.q == 0) throw UsageError("--table: empty");
      const auto check = satisfies_functional_equation(psi);
      Output o;
      o.table.columns = {"q", "satisfies", "minimal_period", "primitive", "character_q", "r", "sign",
                         "violation_x", "violation_y", "violation_z"};
      std::vector<json> row{psi.q, check.satisfied, minimal_period(psi), is_primitive(psi)};
      const auto match = check.satisfied ? classify_solution(psi) : std::nullopt;
      for (const json& j : {match ? json(match->character_q) : json(nullptr), match ? json(match->r) : json(nullptr),
                            match ? json(match->sign) : json(nullptr)})
        row.push_back(j);
      for (u64 Triple::*field : {&Triple::x, &Triple::y, &Triple::z})
        row.push_back(check.violation ? json((*check.violation).*field) : json(nullptr));
      o.table.rows.push_back(std::move(row));
      return o;
    };
  }
  {
    struct V {
      u64 q = 1, prime_bound = kDefaultDivisibilityPrimeBound;
      std::string a = "0,0,0", min_abs = "1";
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "divsolve", "x_i = a_i (mod q) with 4(x1x2+x2x3+x3x1)-1 | 4x1x2x3-x1-x2-x3",
                      "funceq divsolve");
    c.opt("q", v->q, "Modulus", true);
    c.opt("a", v->a, "Residues a1,a2,a3");
    c.opt("min-abs", v->min_abs, "Lower bound C for |x_i|");
    c.opt("prime-bound", v->prime_bound, "Search bound for p");
    c.run = [v](const Context&) {
      const auto a = parse_int_list("a", v->a);
      if (a.size() != 3) throw UsageError("--a: need exactly three residues");
      const auto s = solve_divisibility(v->q, {a[0], a[1], a[2]}, parse_big("min-abs", v->min_abs), v->prime_bound);
      Output o;
      o.table = {{"x1", "x2", "x3", "divisor", "numerator", "p", "r", "d"},
                 {{big(s.x[0]), big(s.x[1]), big(s.x[2]), big(s.divisor), big(s.numerator), s.p, s.r, s.d}}};
      return o;
    };
  }
  {
    struct V {
      u64 p = 3;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "hyperbola", "#{x in Z_p : 4x^2 + 1 is a square mod p}", "funceq hyperbola");
    c.opt("p", v->p, "Prime = 3 (mod 4)", true);
    c.run = [v](const Context&) {
      Output o;
      const u64 n = hyperbola_point_count(v->p);
      o.table = {{"p", "count"}, {{v->p, n}}};
      o.text = std::to_string(n);
      return o;
    };
  }
  {
    struct V {
      std::string poly = "x^2+1", factors;
      u64 qmax = 50, x = 1'000'000;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "falsify", "Sign-disagreement pairs in every class n = b (mod q)", "funceq falsify");
    c.opt("poly", v->poly, "Polynomial");
    c.opt("factors", v->factors, "Declared factorization, ';'-separated");
    c.opt("qmax", v->qmax, "Largest modulus");
    c.opt("x", v->x, "Search bound");
    c.run = [v](const Context& ctx) {
      const auto factors = parse_factor_list(v->factors);
      const auto table = falsify_periodicity(parse_polynomial(v->poly), v->qmax, v->x, factors, {ctx.threads, false});
      Output o;
      o.table.columns = {"q", "phase", "n1", "n2"};
      u64 missing = 0;
      for (const auto& w : table) {
        o.table.rows.push_back({w.q, w.phase, w.pair ? json(w.pair->first) : json(nullptr),
                                w.pair ? json(w.pair->second) : json(nullptr)});
        missing += !w.pair;
      }
      o.extra["missing"] = missing;
      o.status = missing ? kGateFailed : kOk;
      return o;
    };
  }
}

inline std::vector<json> pell_row(const PellSolution& s) { return {big(s.x), big(s.y), big(s.n)}; }

inline void add_pell(Registry& reg, CLI::App& app) {
  auto* group = app.add_subcommand("pell", "Pell equations x^2 - D y^2 = N");
  group->require_subcommand(1);
  {
    struct V {
      u64 d = 2;
      int sign = 1;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "fund", "Fundamental solution of x^2 - D y^2 = sign", "pell fund");
    c.opt("d", v->d, "Non-square D", true);
    c.opt("sign", v->sign, "+1 or -1");
    c.run = [v](const Context&) {
      if (v->sign != 1 && v->sign != -1) throw UsageError("--sign: must be 1 or -1");
      const auto s = fundamental_solution(v->d, v->sign);
      Output o;
      o.table.columns = {"d", "sign", "x", "y"};
      if (s) {
        o.table.rows.push_back({v->d, v->sign, big(s->x), big(s->y)});
      } else {
        o.text = "none";
      }
      return o;
    };
  }
  {
    struct V {
      u64 d = 2, count = 3;
      std::string x, y, n;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "generate", "Further solutions from a base solution of x^2 - D y^2 = N", "pell generate");
    c.opt("d", v->d, "Non-square D", true);
    c.opt("x", v->x, "Base x", true);
    c.opt("y", v->y, "Base y", true);
    c.opt("n", v->n, "Right-hand side N", true);
    c.opt("count", v->count, "How many solutions to emit");
    c.run = [v](const Context&) {
      const PellSolution base{parse_big("x", v->x), parse_big("y", v->y), parse_big("n", v->n)};
      const auto sols = generate_solutions(base, make_pell_context(v->d), v->count);
      Output o;
      o.table.columns = {"index", "x", "y", "n"};
      u64 k = 1;
      for (const auto& s : sols) {
        auto row = pell_row(s);
        row.insert(row.begin(), k++);
        o.table.rows.push_back(std::move(row));
      }
      return o;
    };
  }
  {
    struct V {
      u64 bound = 10000;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "census", "x^2 - p y^2 = -1 for primes p = 1 (mod 4)", "pell census");
    c.opt("bound", v->bound, "Largest p");
    c.run = [v](const Context&) {
      Output o;
      o.table.columns = {"p", "x", "y", "n", "n_mod_2"};
      for (const auto& r : negative_pell_census(v->bound))
        o.table.rows.push_back({r.p, big(r.x), big(r.y), big(r.n), static_cast<int>(r.n % 2)});
      return o;
    };
  }
  {
    struct V {
      u64 d = 2;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "cf", "Continued fraction of sqrt(D)", "pell cf");
    c.opt("d", v->d, "Non-square D", true);
    c.run = [v](const Context&) {
      const auto cf = sqrt_cf(v->d);
      std::string period;
      for (auto a : cf.period) period += (period.empty() ? "" : " ") + std::to_string(a);
      Output o;
      o.table = {{"d", "a0", "period_length", "period"}, {{v->d, cf.a0, cf.period.size(), period}}};
      json list = json::array();
      for (auto a : cf.period) list.push_back(a);
      o.extra["period_terms"] = list;
      return o;
    };
  }
}

inline void add_cubic(Registry& reg, CLI::App& app) {
  auto* group = app.add_subcommand("cubic", "P(x) = x(x^2 - Bx + C)");
  group->require_subcommand(1);
  struct V {
    std::string b = "0", c = "2";
    u64 x = 1000;
  };
  {
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "reduce", "Reduction to a four-term product", "cubic reduce");
    c.opt("b", v->b, "B >= 0");
    c.opt("c", v->c, "C");
    c.run = [v](const Context&) {
      const auto r = build_reduction(parse_big("b", v->b), parse_big("c", v->c));
      const auto four = four_term_product(r);
      Output o;
      o.table = {{"b", "c", "delta", "k", "y", "n0", "t1", "t2", "v2_k", "lambda_k", "distinct_shifts"},
                 {{big(r.b), big(r.c), big(r.delta), big(r.k), big(r.y), big(r.n0), big(r.t1), big(r.t2), r.v2_k,
                   r.lambda_k, four.distinct}}};
      o.extra["four_term_product"] = four.product.to_string();
      return o;
    };
  }
  {
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "census", "Signs of lambda(P(n)) for n <= X", "cubic census");
    c.opt("b", v->b, "B >= 0");
    c.opt("c", v->c, "C");
    c.opt("x", v->x, "Upper bound X");
    c.run = [v](const Context& ctx) {
      const auto census = cubic_sign_census(parse_big("b", v->b), parse_big("c", v->c), v->x, {ctx.threads, false});
      Output o;
      o.table.columns = {"subset", "plus", "minus"};
      o.table.rows.push_back({"all", census.all.plus, census.all.minus});
      if (census.progression) o.table.rows.push_back({"progression", census.progression->plus, census.progression->minus});
      return o;
    };
  }
}

inline std::vector<cd> function_values(const PrimeFunction& f, u64 n) {
  std::vector<cd> out(n);
  if (const auto* g = std::get_if<MultFn>(&f)) {
    const auto e = exponent_range(1, n, g->order(), [&](u64 p) { return g->exponent_at_prime(p); });
    for (u64 i = 0; i < n; ++i) out[i] = root_of_unity(e[i], g->order());
  } else {
    const auto& chi = std::get<RealCharacter>(f);
    for (u64 i = 0; i < n; ++i) out[i] = chi(static_cast<i64>(i + 1));
  }
  return out;
}

inline void add_corr(Registry& reg, CLI::App& app) {
  auto* group = app.add_subcommand("corr", "Correlations, distances, Gowers norms, exponential sums");
  group->require_subcommand(1);
  {
    struct V {
      std::string fn = "liouville", fn_file, forms = "1,0";
      u64 x = 1000;
      bool log = false;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "avg", "Averages of prod g(a_j n + h_j) over n <= X", "corr avg");
    c.opt("fn", v->fn, "Function name");
    c.opt("fn-file", v->fn_file, "Function file");
    c.opt("forms", v->forms, "Forms a,h separated by ';'");
    c.opt("x", v->x, "Upper bound X");
    c.flag("log", v->log, "Also report the logarithmic average");
    c.run = [v](const Context& ctx) {
      const auto g = require_multfn(load_function(v->fn, v->fn_file));
      CorrelationSpec spec{{}, v->x};
      for (const auto& part : split(v->forms, ';')) {
        const auto ah = parse_int_list("forms", part);
        if (ah.size() != 2 || ah[0] < 1) throw UsageError("--forms: each form is a,h with a >= 1");
        spec.forms.push_back({g, static_cast<u64>(ah[0]), ah[1]});
      }
      const auto r = correlation_average(spec, ctx.threads);
      Output o;
      o.table.columns = {"kind", "re", "im", "abs"};
      o.table.rows.push_back({"cesaro", r.cesaro.real(), r.cesaro.imag(), std::abs(r.cesaro)});
      if (v->log)
        o.table.rows.push_back({"logarithmic", r.logarithmic.real(), r.logarithmic.imag(), std::abs(r.logarithmic)});
      o.extra["order"] = r.order;
      o.extra["class_counts"] = r.class_counts;
      o.extra["independent"] = r.independent;
      return o;
    };
  }
  {
    struct V {
      std::string fn = "liouville", fn_file;
      u64 n = 4096;
      unsigned k = 2;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "gowers", "Gowers U^k norm of g on [1, N]", "corr gowers");
    c.opt("fn", v->fn, "Function name");
    c.opt("fn-file", v->fn_file, "Function file");
    c.opt("n", v->n, "Length N");
    c.opt("k", v->k, "Order k in 1..3");
    c.run = [v](const Context&) {
      const auto f = load_function(v->fn, v->fn_file);
      const double norm = gowers_norm(function_values(f, v->n), v->k);
      Output o;
      o.table = {{"n", "k", "norm"}, {{v->n, v->k, norm}}};
      return o;
    };
  }
  {
    struct V {
      std::string f = "liouville", g = "one";
      u64 x = 1000;
      double t = 0;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "distance", "Pretentious distance D(f, g n^it; x)", "corr distance");
    c.opt("f", v->f, "First function");
    c.opt("g", v->g, "Second function");
    c.opt("x", v->x, "Prime bound x");
    c.opt("t", v->t, "Twist t");
    c.run = [v](const Context&) {
      const double d = pretentious_distance(parse_function_name(v->f), parse_function_name(v->g), v->x, v->t);
      Output o;
      o.table = {{"x", "t", "distance"}, {{v->x, v->t, d}}};
      return o;
    };
  }
  {
    struct V {
      u64 n = 4, m = 0, trials = 1000;
      bool grid = false;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "expsum", "Max of |sum w_j e(j/n)| over 0 <= w_j <= 1, sum w = m", "corr expsum");
    c.opt("n", v->n, "Length n");
    c.opt("m", v->m, "Mass m (0 = every m <= n)");
    c.opt("trials", v->trials, "Random weight vectors per (n, m)");
    c.flag("grid", v->grid, "Run every n' <= n");
    c.run = [v](const Context& ctx) {
      Output o;
      o.table.columns = {"n", "m", "trials", "violations", "equality_mismatches", "rhs", "max_lhs"};
      bool ok = true;
      for (u64 n = v->grid ? 1 : v->n; n <= v->n; ++n) {
        for (u64 m = v->m ? v->m : 1; m <= (v->m ? v->m : n); ++m) {
          const auto r = max_exp_sum_check(n, m, v->trials, ctx.seed + n * 1000 + m);
          o.table.rows.push_back({n, m, r.trials, r.violations, r.equality_mismatches, r.rhs, r.max_lhs});
          ok = ok && r.holds();
        }
      }
      o.status = ok ? kOk : kGateFailed;
      return o;
    };
  }
  {
    struct V {
      u64 q = 2;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "delta", "delta_q", "corr delta");
    c.opt("q", v->q, "q >= 2", true);
    c.run = [v](const Context&) {
      Output o;
      o.table = {{"q", "delta"}, {{v->q, delta_for_q(v->q)}}};
      return o;
    };
  }
}

inline void add_search(Registry& reg, CLI::App& app) {
  auto* group = app.add_subcommand("search", "Witness searches");
  group->require_subcommand(1);
  for (unsigned e : {3u, 2u}) {
    struct V {
      u64 amax = 100, bmax = 100, mbound = 20;
    };
    auto v = std::make_shared<V>();
    if (e == 2) v->mbound = 30;
    const std::string name = e == 3 ? "cubic-table" : "quad-table";
    auto& c = reg.add(group, name, e == 3 ? "Least m with lambda(a m^3 + b) = +-1" : "Least m with lambda(a m^2 + b) = +-1",
                      "search " + name);
    c.opt("amax", v->amax, "Largest a");
    c.opt("bmax", v->bmax, "Largest b");
    c.opt("mbound", v->mbound, "Largest m searched");
    c.run = [v, e](const Context& ctx) {
      const auto t = witness_table(e, v->amax, v->bmax, v->mbound, ctx.threads);
      Output o;
      o.table.columns = {"a", "b", "m_plus", "m_minus"};
      for (const auto& cell : t.cells)
        o.table.rows.push_back({cell.a, cell.b, optional_json(cell.m_plus), optional_json(cell.m_minus)});
      json misses = json::array();
      for (const auto& m : t.misses) misses.push_back({{"a", m.a}, {"b", m.b}, {"sign", m.sign}});
      o.extra["misses"] = misses;
      o.status = t.complete() ? kOk : kGateFailed;
      return o;
    };
  }
  {
    struct V {
      u64 p = 2, q = 3, r = 4;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "beukers", "Is 1/p + 1/q + 1/r > 1?", "search beukers");
    c.opt("p", v->p, "Exponent p");
    c.opt("q", v->q, "Exponent q");
    c.opt("r", v->r, "Exponent r");
    c.run = [v](const Context&) {
      const bool holds = beukers_precondition(v->p, v->q, v->r);
      Output o;
      o.table = {{"p", "q", "r", "holds"}, {{v->p, v->q, v->r, holds}}};
      o.text = holds ? "true" : "false";
      return o;
    };
  }
  {
    struct V {
      unsigned d = 1;
      u64 height = 5, h = 50, samples = 0;
      std::string fn = "liouville", fn_file;
      std::uint32_t v = 1;
      int sign = 0;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "almost-all", "Share of polynomials with no n <= H where g(P(n)) = e(v/q)",
                      "search almost-all");
    c.opt("d", v->d, "Degree");
    c.opt("height", v->height, "Coefficient bound N");
    c.opt("hmax", v->h, "Largest n searched (H)");
    c.opt("fn", v->fn, "Function name");
    c.opt("fn-file", v->fn_file, "Function file");
    c.opt("v", v->v, "Target exponent v in Z_q");
    c.opt("sign", v->sign, "Target value +1 or -1 (overrides --v)");
    c.opt("samples", v->samples, "Polynomials to sample (0 = all)");
    c.run = [v](const Context& ctx) {
      const auto g = require_multfn(load_function(v->fn, v->fn_file));
      std::uint32_t target = v->v;
      if (v->sign == 1) target = 0;
      else if (v->sign == -1) {
        if (g.order() % 2) throw UsageError("--sign -1: the order of g is odd");
        target = g.order() / 2;
      } else if (v->sign != 0) {
        throw UsageError("--sign: must be 1 or -1");
      }
      const auto r = almost_all_experiment(v->d, v->height, v->h, g, target, v->samples, ctx.seed);
      Output o;
      o.table.columns = {"polynomial", "n"};
      for (const auto& row : r.rows) o.table.rows.push_back({row.poly.to_string(), optional_json(row.n)});
      o.extra["polynomials"] = r.polynomials;
      o.extra["without_witness"] = r.without_witness;
      o.extra["fraction"] = r.fraction().value();
      o.extra["exhaustive"] = r.exhaustive;
      o.text = std::to_string(r.without_witness) + "/" + std::to_string(r.polynomials);
      return o;
    };
  }
  {
    struct V {
      std::string a = "1", b = "1";
      unsigned e1 = 3, e2 = 4;
      u64 m = 1, n = 1;
    };
    auto v = std::make_shared<V>();
    auto& c = reg.add(group, "lift", "Write a m^e1 + b n^e2 as h z^2 with h squarefree", "search lift");
    c.opt("a", v->a, "Coefficient a");
    c.opt("b", v->b, "Coefficient b");
    c.opt("e1", v->e1, "Exponent of m");
    c.opt("e2", v->e2, "Exponent of n");
    c.opt("m", v->m, "Witness m");
    c.opt("n", v->n, "Witness n");
    c.run = [v](const Context&) {
      const auto l = coprime_witness_lift(parse_big("a", v->a), parse_big("b", v->b), v->e1, v->e2, v->m, v->n);
      Output o;
      o.table = {{"value", "h", "z", "lambda_h", "coprime"}, {{big(l.value), big(l.h), big(l.z), l.lambda_h, l.coprime}}};
      return o;
    };
  }
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

inline void apply_config_value(CLI::Option* opt, const json& value) {
  if (opt == nullptr || opt->count() > 0) return;
  opt->add_result(value.is_string() ? value.get<std::string>() : value.dump());
  opt->run_callback();
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"liouville-lab: Liouville function experiments", "llab"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string format = "text", config_path;
  bool csv = false, as_json = false;
  u64 seed = kDefaultSeed;
  unsigned threads = 1;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_flag("--csv", csv, "Same as --format csv");
  app.add_flag("--json", as_json, "Same as --format json");
  app.add_option("--seed", seed, "Seed for every randomized step");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--config", config_path, "JSON config; flags take precedence");

  Registry reg;
  add_lambda(reg, app);
  add_sieve(reg, app);
  add_smooth(reg, app);
  add_funceq(reg, app);
  add_pell(reg, app);
  add_cubic(reg, app);
  add_corr(reg, app);
  add_search(reg, app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Command* chosen = nullptr;
  for (auto& c : reg.commands())
    if (c.app->parsed()) chosen = &c;
  if (chosen == nullptr) {
    err << "error: missing subcommand\n";
    return kUsage;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("--config: cannot open '" + config_path + "'");
      json cfg;
      try {
        cfg = json::parse(in);
      } catch (const json::exception& e) {
        throw UsageError("--config: " + std::string(e.what()));
      }
      if (!cfg.is_object()) throw UsageError("--config: expected a JSON object");
      if (cfg.contains("command") && cfg["command"] != chosen->path)
        throw UsageError("--config: written for '" + cfg["command"].dump() + "', not '" + chosen->path + "'");
      if (cfg.contains("params")) {
        for (const auto& [key, value] : cfg["params"].items()) {
          auto* opt = chosen->app->get_option_no_throw("--" + key);
          if (opt == nullptr) throw UsageError("--config: unknown parameter '" + key + "'");
          apply_config_value(opt, value);
        }
      }
      for (const char* key : {"seed", "threads", "format"})
        if (cfg.contains(key)) apply_config_value(app.get_option_no_throw(std::string("--") + key), cfg[key]);
    }
    for (const auto& name : chosen->required)
      if (chosen->app->get_option("--" + name)->count() == 0) throw UsageError("missing required option --" + name);
    if (csv) format = "csv";
    if (as_json) format = "json";
    if (threads < 1) throw UsageError("--threads: must be >= 1");

    json config = json::object();
    config["command"] = chosen->path;
    json params = json::object();
    for (const auto& [name, get] : chosen->params) params[name] = get();
    config["params"] = params;
    config["seed"] = seed;
    config["threads"] = threads;
    config["format"] = format;

    const Output o = chosen->run(Context{seed, threads});
    render(out, format, config, o);
    return o.status;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

inline int dispatch(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

}  // namespace llab::cli
