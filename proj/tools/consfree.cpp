// consfree: command-line front end.
//
// Exit codes: 0 success / yes, 1 analysis failure / no, 2 input error,
// 3 unknown (a budget ran out).

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "consfree/consfree.hpp"

using namespace consfree;
using json = nlohmann::json;

namespace {

constexpr int exit_ok = 0, exit_fail = 1, exit_input = 2, exit_unknown = 3;
constexpr std::uint64_t default_seed = 20160;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Trs load_trs(const std::string& path) {
  try {
    return parse_trs(slurp(path));
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string join(const std::set<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
  return out;
}

// ---- check -----------------------------------------------------------------

int cmd_check(const std::string& path, bool as_json) {
  Trs trs = load_trs(path);
  auto violations = check_cons_free(trs);
  std::vector<std::size_t> non_semi;
  for (std::size_t i = 0; i < trs.rules().size(); ++i)
    if (!check_semi_linear(trs.rules()[i])) non_semi.push_back(i);
  std::optional<ConstrainedReport> rep;
  if (violations.empty()) rep = check_constrained(trs);

  if (as_json) {
    auto line = [](json j) {
      j["version"] = version;
      std::cout << j.dump() << "\n";
    };
    for (const auto& v : violations)
      line({{"kind", "violation"}, {"property", "cons-free"}, {"rule", v.rule_index}, {"condition", v.condition},
            {"subterm", v.subterm.to_string()}, {"message", v.message}});
    if (violations.empty()) line({{"kind", "certificate"}, {"property", "cons-free"}});
    for (auto i : non_semi)
      line({{"kind", "violation"}, {"property", "semi-linear"}, {"rule", i}, {"message", trs.rules()[i].to_string()}});
    if (non_semi.empty()) line({{"kind", "certificate"}, {"property", "semi-linear"}});
    if (rep && rep->ok())
      line({{"kind", "certificate"}, {"property", "constrained"}, {"witness", rep->witness()->a_set}});
    if (rep && !rep->ok())
      line({{"kind", "violation"}, {"property", "constrained"}, {"forcing_rules", rep->forcing_rules},
            {"required", rep->required}});
    if (!rep) line({{"kind", "skipped"}, {"property", "constrained"}, {"message", "requires a cons-free system"}});
  } else {
    if (violations.empty()) {
      std::cout << "cons-free: ok\n";
    } else {
      std::cout << "cons-free: " << violations.size() << " violation(s)\n";
      for (const auto& v : violations)
        std::cout << "  rule " << v.rule_index << " (condition " << v.condition << "): " << v.message << "\n";
    }
    if (non_semi.empty()) {
      std::cout << "semi-linear: ok\n";
    } else {
      std::cout << "semi-linear: " << non_semi.size() << " of " << trs.rules().size() << " rules are not\n";
      for (auto i : non_semi) std::cout << "  rule " << i << ": " << trs.rules()[i].to_string() << "\n";
    }
    if (!rep) {
      std::cout << "constrained: n/a (requires a cons-free system)\n";
    } else if (rep->ok()) {
      std::cout << "constrained: ok (A = {" << join(rep->witness()->a_set) << "})\n";
    } else {
      std::cout << "constrained: no\n";
      for (auto i : rep->forcing_rules)
        std::cout << "  rule " << i << " (" << trs.rules()[i].to_string() << ") is not semi-linear but "
                  << trs.rules()[i].lhs.name() << " must be in A\n";
    }
  }
  return violations.empty() ? exit_ok : exit_fail;
}

// ---- decide ----------------------------------------------------------------

TabulationMode parse_mode(const std::string& m) {
  if (m == "full") return TabulationMode::full;
  if (m == "demand") return TabulationMode::demand;
  return TabulationMode::automatic;
}

void print_stats(const TabulationStats& st) {
  std::cout << "mode: " << to_string(st.mode) << "\n"
            << "input_size: " << st.input_size << "\n"
            << "max_arity: " << st.max_arity << "\n"
            << "b_size: " << st.b_size << "\n"
            << "keys: " << st.keys << "\n"
            << "generations: " << st.generations << "\n"
            << "basic_ops: " << st.basic_ops << "\n"
            << "bound_value: " << st.bound_value << "\n";
}

int cmd_decide(const std::string& path, const std::string& bits, const std::string& engine, const Budgets& budgets,
               const std::string& mode) {
  Trs trs = load_trs(path);
  try {
    validate_bits(bits);
    decision_symbols(trs);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  if (engine == "table") {
    DecideResult r;
    try {
      r = decide(trs, bits, {parse_mode(mode)});
    } catch (const NotConsFree& e) {
      std::cerr << "error: " << e.what() << "\n";
      return exit_fail;
    } catch (const TableTooLarge& e) {
      std::cout << "unknown\n";
      std::cerr << "error: " << e.what() << "\n";
      return exit_unknown;
    }
    std::cout << (r.accepted ? "yes" : "no") << "\n";
    print_stats(r.stats);
    return r.accepted ? exit_ok : exit_fail;
  }
  Strategy strategy = engine == "oracle-full" ? Strategy::full : Strategy::cbv;
  auto ds = decision_symbols(trs);
  Term s = Term::app(ds.start, {encode_list(ds, bits)});
  auto res = reachable_data(trs, s, strategy, budgets);
  auto v = verdict_from(res, Term::app(ds.yes));
  std::cout << to_string(v) << "\n"
            << "strategy: " << to_string(strategy) << "\n"
            << "results: " << to_string(res.results) << "\n"
            << "complete: " << (res.complete ? "true" : "false") << "\n"
            << "explored: " << res.explored << "\n"
            << "truncated_by: " << to_string(res.truncated_by) << "\n";
  return v == Verdict::yes ? exit_ok : v == Verdict::no ? exit_fail : exit_unknown;
}

// ---- run -------------------------------------------------------------------

int cmd_run(const std::string& path, const std::string& term_text, const std::string& strategy_name,
            std::size_t max_steps, const std::string& pick, std::uint64_t seed) {
  Trs trs = load_trs(path);
  Term t = [&] {
    try {
      return parse_term(trs, term_text);
    } catch (const ParseError& e) {
      throw InputError(std::string("term: ") + e.what());
    }
  }();
  Strategy strategy = strategy_name == "full" ? Strategy::full : Strategy::cbv;
  auto tr = reduce(trs, t, strategy, max_steps, pick == "random" ? Pick::random : Pick::first, seed);
  std::cout << export_trace(trs, tr);
  auto terms = tr.materialize(trs);
  const Term& last = terms.back();
  bool normal = steps(trs, last, strategy).empty();
  std::cout << "result: " << last.to_string() << (normal ? "" : " (step limit reached)") << "\n";
  return exit_ok;
}

// ---- transform ---------------------------------------------------------------

struct VerifyReport {
  std::size_t terms = 0;
  std::size_t incomplete = 0;
  std::optional<std::string> failure;
};

BSet verification_b(const Trs& trs) { return compute_rhs_data(trs); }

std::vector<Term> b_safe_up_to(const Trs& trs, const BSet& b, std::size_t max_size) {
  std::vector<std::vector<Term>> by_size(max_size + 1);
  for (const auto& t : b.items())
    if (t.size() <= max_size) by_size[t.size()].push_back(t);
  for (std::size_t n = 1; n <= max_size; ++n) {
    for (const auto& f : trs.defined()) {
      std::vector<Term> args;
      std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t left) {
        if (i == f->arity) {
          if (left == 0) by_size[n].push_back(Term::app(f, args));
          return;
        }
        for (std::size_t s = 1; s + (f->arity - i - 1) <= left; ++s)
          for (const auto& t : by_size[s]) {
            args.push_back(t);
            go(i + 1, left - s);
            args.pop_back();
          }
      };
      go(0, n - 1);
    }
  }
  std::vector<Term> out;
  for (auto& v : by_size) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// Oracle-level checks of a pass on every B-safe term up to `n` nodes.
VerifyReport verify_pass(const Trs& original, const std::string& pass, std::size_t n, const Budgets& budgets) {
  VerifyReport rep;
  auto fail = [&](const Term& s, const std::string& what) {
    if (!rep.failure) rep.failure = s.to_string() + ": " + what;
  };
  if (pass == "semilin" || pass == "both") {
    auto counts = compute_counts(original);
    auto sigmap = make_signature_map(original, counts);
    Trs bullet = semi_linearize(original);
    for (const auto& s : b_safe_up_to(original, verification_b(original), n)) {
      auto a = reachable_data(original, s, Strategy::full, budgets);
      auto b = reachable_data(bullet, phi(sigmap, counts, s), Strategy::full, budgets);
      ++rep.terms;
      if (!a.complete || !b.complete) {
        ++rep.incomplete;
        continue;
      }
      if (a.results != b.results) fail(s, to_string(a.results) + " vs " + to_string(b.results));
    }
    if (pass == "semilin") return rep;
  }
  Trs base = pass == "both" ? semi_linearize(original) : original;
  Trs ext = bottom_extend(base);
  Term bot = Term::app(ext.symbol(bottom_name));
  bool semi = true;
  for (const auto& r : base.rules()) semi = semi && check_semi_linear(r);
  BSet b = verification_b(base);
  for (const auto& s : b_safe_up_to(base, b, n)) {
    auto full = reachable_data(base, s, Strategy::full, budgets);
    auto cbv = reachable_data(ext, s, Strategy::cbv, budgets);
    ++rep.terms;
    if (!full.complete || !cbv.complete) {
      ++rep.incomplete;
      continue;
    }
    if (cbv.results.empty()) fail(s, "no call-by-value data result after bottom extension");
    cbv.results.erase(bot);
    bool ok = semi ? cbv.results == full.results
                   : std::includes(full.results.begin(), full.results.end(), cbv.results.begin(), cbv.results.end());
    if (!ok) fail(s, "full " + to_string(full.results) + " vs call-by-value " + to_string(cbv.results));
  }
  return rep;
}

int cmd_transform(const std::string& path, const std::string& pass, const std::string& trace_map,
                  std::optional<std::size_t> verify, const Budgets& budgets) {
  Trs trs = load_trs(path);
  TransformResult first, second;
  bool two = pass == "both";
  try {
    if (pass == "semilin" || two) {
      first = semi_linearize_detailed(trs);
      if (two) second = bottom_extend_detailed(first.trs);
    } else {
      first = bottom_extend_detailed(trs);
    }
  } catch (const NotConstrained& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_fail;
  } catch (const NotConsFree& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_fail;
  } catch (const TransformError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_fail;
  }
  const Trs& out = two ? second.trs : first.trs;
  std::cout << print_trs(out) << "\n";

  if (!trace_map.empty()) {
    std::ofstream tm(trace_map);
    if (!tm) throw InputError("cannot write " + trace_map);
    // Original rule i -> output rule; added rules have no source.
    for (std::size_t i = 0; i < first.rule_map.size(); ++i) {
      std::size_t j = two ? second.rule_map.at(first.rule_map[i]) : first.rule_map[i];
      tm << i << " -> " << j << "\n";
    }
    std::vector<std::size_t> added = first.added;
    if (two) {
      for (auto& a : added) a = second.rule_map.at(a);
      added.insert(added.end(), second.added.begin(), second.added.end());
    }
    for (auto a : added) tm << "+ -> " << a << "\n";
  }

  if (verify) {
    auto rep = verify_pass(trs, pass, *verify, budgets);
    std::cout << "; verify " << pass << " up to size " << *verify << ": "
              << (rep.failure ? "fail" : rep.incomplete ? "unknown" : "pass") << " (" << rep.terms << " terms, "
              << rep.incomplete << " incomplete)\n";
    if (rep.failure) {
      std::cout << "; counterexample: " << *rep.failure << "\n";
      return exit_fail;
    }
    if (rep.incomplete) return exit_unknown;
  }
  return exit_ok;
}

// ---- compile-tm --------------------------------------------------------------

int cmd_compile_tm(const std::string& path, const std::string& out_path, std::optional<std::size_t> selftest,
                   const std::string& manifest_path) {
  std::string text = slurp(path);
  consfree::tm::TmParseResult parsed;
  consfree::tm::CompiledTrs compiled;
  try {
    parsed = consfree::tm::parse_tm(text);
    compiled = consfree::tm::compile_tm(parsed.tm);
  } catch (const consfree::tm::TmError& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return exit_fail;
  }
  for (const auto& w : parsed.warnings) std::cerr << "warning: " << path << ": " << w << "\n";
  std::string printed = print_trs(compiled.trs) + "\n";
  if (out_path.empty()) {
    std::cout << printed;
  } else {
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write " + out_path);
    out << printed;
  }
  if (!manifest_path.empty()) {
    std::ofstream mf(manifest_path);
    if (!mf) throw InputError("cannot write " + manifest_path);
    json j = {{"version", version}, {"digits", compiled.digits}, {"symbols", compiled.symbol_manifest}};
    mf << j.dump(2) << "\n";
  }
  if (selftest) {
    std::size_t agree = 0, total = 0;
    for (std::size_t n = 0; n <= *selftest; ++n) {
      for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
        std::string bits;
        for (std::size_t i = 0; i < n; ++i) bits += ((m >> (n - 1 - i)) & 1) ? '1' : '0';
        bool sim = consfree::tm::simulate_tm(parsed.tm, bits, parsed.tm.clock(n)) == consfree::tm::Outcome::accept;
        bool dec = decide(compiled.trs, bits, {TabulationMode::automatic}).accepted;
        if (sim != dec) std::cerr << "mismatch on \"" << bits << "\": machine " << sim << ", rules " << dec << "\n";
        agree += sim == dec;
        ++total;
      }
    }
    (out_path.empty() ? std::cerr : std::cout) << agree << "/" << total << " inputs agree\n";
    if (agree != total) return exit_fail;
  }
  return exit_ok;
}

// ---- bench -------------------------------------------------------------------

int cmd_bench(const std::string& path, const std::vector<std::size_t>& sizes, const std::string& mode,
              const std::string& format) {
  Trs trs = load_trs(path);
  try {
    decision_symbols(trs);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  struct Row {
    std::size_t n;
    TabulationStats st;
    bool accepted;
  };
  std::vector<Row> rows;
  for (auto n : sizes) {
    auto r = decide(trs, std::string(n, '0'), {parse_mode(mode)});
    rows.push_back({n, r.stats, r.accepted});
  }
  std::optional<double> slope;
  if (rows.size() >= 2) {
    double mx = 0, my = 0;
    for (const auto& r : rows) {
      mx += std::log(static_cast<double>(r.n)) / rows.size();
      my += std::log(static_cast<double>(std::max<std::uint64_t>(r.st.basic_ops, 1))) / rows.size();
    }
    double num = 0, den = 0;
    for (const auto& r : rows) {
      double dx = std::log(static_cast<double>(r.n)) - mx;
      num += dx * (std::log(static_cast<double>(std::max<std::uint64_t>(r.st.basic_ops, 1))) - my);
      den += dx * dx;
    }
    if (den > 0) slope = num / den;
  }
  if (format == "json") {
    for (const auto& r : rows) {
      json j = {{"version", version},
                {"n", r.n},
                {"k", r.st.max_arity},
                {"generations", r.st.generations},
                {"basic_ops", r.st.basic_ops},
                {"bound_value", r.st.bound_value},
                {"within_bound", static_cast<double>(r.st.basic_ops) <= r.st.bound_value},
                {"accepted", r.accepted}};
      j["slope"] = slope ? json(*slope) : json(nullptr);
      std::cout << j.dump() << "\n";
    }
    return exit_ok;
  }
  std::cout << "version,n,k,generations,basic_ops,bound_value,within_bound,accepted,slope\n";
  for (const auto& r : rows) {
    std::ostringstream bound;
    bound.precision(17);
    bound << r.st.bound_value;
    std::cout << version << "," << r.n << "," << r.st.max_arity << "," << r.st.generations << ","
              << r.st.basic_ops << "," << bound.str() << ","
              << (static_cast<double>(r.st.basic_ops) <= r.st.bound_value ? "true" : "false") << ","
              << (r.accepted ? "true" : "false") << ",";
    if (slope) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", *slope);
      std::cout << buf;
    }
    std::cout << "\n";
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cons-free term rewriting toolkit"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);

  std::uint64_t seed = default_seed;
  if (const char* env = std::getenv("CONSFREE_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: CONSFREE_SEED is not a number\n";
      return exit_input;
    }
  }
  app.add_option("--seed", seed, "Seed for randomized choices (CONSFREE_SEED overrides the default)");

  Budgets budgets;
  auto add_budgets = [&](CLI::App* sub) {
    sub->add_option("--max-terms", budgets.max_terms, "Oracle budget: distinct terms")->check(CLI::PositiveNumber);
    sub->add_option("--max-term-size", budgets.max_term_size, "Oracle budget: term size")
        ->check(CLI::PositiveNumber);
  };

  std::string path, bits, engine = "table", mode = "auto", pass, trace_map, out_path, manifest, term, strategy = "cbv",
                      pick = "first", format = "csv";
  bool as_json = false;
  std::size_t max_steps = 1000;
  std::optional<std::size_t> verify, selftest;
  std::vector<std::size_t> sizes{4, 8, 16, 32};

  auto* check = app.add_subcommand("check", "Cons-freeness, semi-linearity and constrainedness");
  check->add_option("path", path, "TRS file")->required();
  check->add_flag("--json", as_json, "JSON lines output");

  auto* dec = app.add_subcommand("decide", "Decide an input with the table or an oracle");
  dec->add_option("path", path, "TRS file")->required();
  dec->add_option("bits", bits, "Input over {0,1}");
  dec->add_option("--engine", engine, "table | oracle-full | oracle-cbv")
      ->check(CLI::IsMember({"table", "oracle-full", "oracle-cbv"}));
  dec->add_option("--mode", mode, "Table mode: full | demand | auto")->check(CLI::IsMember({"full", "demand", "auto"}));
  add_budgets(dec);

  auto* run = app.add_subcommand("run", "Follow one reduction sequence");
  run->add_option("path", path, "TRS file")->required();
  run->add_option("term", term, "Ground start term")->required();
  run->add_option("--strategy", strategy, "full | cbv")->check(CLI::IsMember({"full", "cbv"}));
  run->add_option("--max-steps", max_steps, "Step limit");
  run->add_option("--pick", pick, "first | random")->check(CLI::IsMember({"first", "random"}));

  auto* tr = app.add_subcommand("transform", "Semi-linearization and bottom extension");
  tr->add_option("path", path, "TRS file")->required();
  tr->add_option("--pass", pass, "semilin | bottom | both")
      ->required()
      ->check(CLI::IsMember({"semilin", "bottom", "both"}));
  tr->add_option("--trace-map", trace_map, "Write the rule correspondence to this file");
  tr->add_option("--verify", verify, "Check the pass with the oracle on B-safe terms up to this size");
  add_budgets(tr);

  auto* ctm = app.add_subcommand("compile-tm", "Compile a Turing machine into a cons-free TRS");
  ctm->add_option("path", path, "Machine file (.tm)")->required();
  ctm->add_option("-o,--output", out_path, "Output file (default: standard output)");
  ctm->add_option("--selftest", selftest, "Compare with the simulator on all inputs up to this length");
  ctm->add_option("--manifest", manifest, "Write the symbol roles as JSON to this file");

  auto* bench = app.add_subcommand("bench", "Tabulation statistics on all-zero inputs");
  bench->add_option("path", path, "TRS file")->required();
  bench->add_option("--sizes", sizes, "Input lengths")->delimiter(',')->check(CLI::PositiveNumber);
  bench->add_option("--mode", mode, "Table mode: full | demand | auto")
      ->check(CLI::IsMember({"full", "demand", "auto"}));
  bench->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*check) return cmd_check(path, as_json);
    if (*dec) return cmd_decide(path, bits, engine, budgets, mode);
    if (*run) return cmd_run(path, term, strategy, max_steps, pick, seed);
    if (*tr) return cmd_transform(path, pass, trace_map, verify, budgets);
    if (*ctm) return cmd_compile_tm(path, out_path, selftest, manifest);
    if (*bench) return cmd_bench(path, sizes, mode, format);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}
