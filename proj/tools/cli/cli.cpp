#include "cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>

#include "mftuple/approx.hpp"
#include "mftuple/construct.hpp"
#include "mftuple/error.hpp"
#include "mftuple/hit_io.hpp"
#include "mftuple/plan_io.hpp"
#include "mftuple/search.hpp"
#include "mftuple/tuples.hpp"
#include "mftuple/verify.hpp"

namespace mft::cli {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

Offsets parse_offsets(const std::string& s, const char* what) {
  Offsets out;
  for (const auto& item : split(s)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string(what) + ": '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw InvalidArgument(std::string(what) + " must not be empty");
  return out;
}

std::vector<Rational> parse_rationals(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& item : split(s)) out.push_back(Rational::parse(item));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Options {
  bool json = false;
  bool seedless = false;
  unsigned extra_rounds = 0;
  std::string function = "phi";
  std::optional<unsigned> h_power;
  std::string alphas, betas, targets, epsilon = "1/10", mode = "value";
  std::string tuple;
  std::string tolerance, avoid;
  std::string plan_path, output;
  std::uint64_t sieve_bound = 100'000;
  std::uint64_t segment_length = std::uint64_t{1} << 20;
  std::uint64_t max_segments = 1'000;
  std::string t_start = "0";
  unsigned workers = 1;
  double time_limit = 0;
  unsigned digits = 30;
  std::uint64_t budget_rho = 100'000'000;
  std::string table, row, p, pair;
};

PrimalityOptions primality_options(const Options& o) {
  PrimalityOptions p;
  p.extra_rounds = o.seedless ? 0 : o.extra_rounds;
  return p;
}

ConstructionPlan make_plan(const Options& o) {
  const ScaledFunction sf = resolve_function(o.function, o.h_power);
  TupleSpec spec(parse_offsets(o.alphas, "--alphas"), parse_offsets(o.betas, "--betas"));
  Goal goal;
  goal.mode = goal_mode_from_string(o.mode);
  goal.targets = parse_rationals(o.targets);
  goal.epsilon = Rational::parse(o.epsilon);
  goal.h_power = sf.h_power;
  return plan_for_goal(sf.f.name, spec, goal);
}

SearchConfig search_config(const Options& o) {
  SearchConfig c;
  c.sieve_bound = o.sieve_bound;
  c.segment_length = o.segment_length;
  c.max_segments = o.max_segments;
  c.t_start = parse_bigint(o.t_start);
  c.worker_count = o.workers;
  c.time_limit = o.time_limit;
  c.primality = primality_options(o);
  return c;
}

std::string plan_summary(const ConstructionPlan& plan) {
  std::ostringstream os;
  os << "function " << plan.function_name << (plan.inverted ? " (working with 1/f)" : "") << "\n";
  os << "L = " << plan.L << ", s = " << plan.s << ", r = " << plan.r.str() << "\n";
  for (std::size_t i = 0; i < plan.w.size(); ++i)
    os << "w_" << i + 1 << " = " << plan.w[i].str() << "  (" << bit_length(plan.w[i].value())
       << " bits)\n";
  os << "M = " << to_decimal(plan.M) << "\nc = " << to_decimal(plan.c) << "\n";
  for (std::size_t j = 0; j < plan.h.size(); ++j) os << "h_" << j + 1 << " = " << plan.h[j].str() << "\n";
  for (std::size_t i = 0; i < plan.g.size(); ++i) os << "g_" << i + 1 << " = " << plan.g[i].str() << "\n";
  return os.str();
}

int emit_outcome(const Options& o, const ConstructionPlan& plan, const SearchOutcome& res,
                 std::ostream& out) {
  if (o.json) {
    out << outcome_to_json(plan, res, o.digits);
  } else if (res.hit) {
    out << hit_report(plan, *res.hit, o.digits);
  } else {
    out << "exhausted: " << res.reason << "\n"
        << "segments " << res.stats.segments << ", candidates " << res.stats.candidates
        << ", survivors " << res.stats.survivors << ", full passes " << res.stats.full_passes
        << ", near misses " << res.stats.near_misses << "\n";
  }
  return res.hit ? ok : mismatch;
}

int cmd_admissible(const Options& o, std::ostream& out) {
  const std::string src = o.tuple.empty() ? o.betas : o.tuple;
  const auto cert = is_admissible(parse_offsets(src, "--tuple"));
  if (o.json) {
    Json j{{"version", "admissible-v1"}, {"admissible", cert.admissible}};
    if (cert.obstruction) j["obstruction"] = *cert.obstruction;
    Json missing = Json::array();
    for (const auto& [p, r] : cert.missing_residues) missing.push_back({p, r});
    j["missing_residues"] = missing;
    out << j.dump(2) << "\n";
  } else {
    out << "admissible: " << (cert.admissible ? "true" : "false") << "\n";
    if (cert.obstruction) out << "covers every residue class mod " << *cert.obstruction << "\n";
    for (const auto& [p, r] : cert.missing_residues) out << "  mod " << p << " misses " << r << "\n";
  }
  return cert.admissible ? ok : mismatch;
}

int cmd_approximate(const Options& o, std::ostream& out) {
  const ScaledFunction sf = resolve_function(o.function, o.h_power);
  const auto targets = parse_rationals(o.targets);
  if (targets.empty()) throw InvalidArgument("--targets is required");
  if (o.tolerance.empty()) throw InvalidArgument("--tolerance is required");
  std::set<std::uint64_t> avoid;
  for (auto v : parse_offsets(o.avoid.empty() ? "0" : o.avoid, "--avoid"))
    if (v > 0) avoid.insert(static_cast<std::uint64_t>(v));
  const auto res = approx_tuple(sf.f, targets, avoid, Rational::parse(o.tolerance));
  Json arr = Json::array();
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (o.json) {
      Json primes = Json::array();
      for (const auto& pp : res[i].w.factors()) primes.push_back(to_decimal(pp.prime));
      arr.push_back({{"target", targets[i].str()},
                     {"w", to_decimal(res[i].w.value())},
                     {"primes", primes},
                     {"f_w", res[i].achieved.str()},
                     {"f_w_decimal", to_decimal(res[i].achieved, o.digits)}});
    } else {
      out << "w_" << i + 1 << " = " << res[i].w.str() << "\n  f(w) = " << res[i].achieved.str()
          << " = " << to_decimal(res[i].achieved, o.digits) << "\n";
    }
  }
  if (o.json) out << Json{{"version", "approximate-v1"}, {"results", arr}}.dump(2) << "\n";
  return ok;
}

int cmd_construct(const Options& o, std::ostream& out) {
  const ConstructionPlan plan = make_plan(o);
  const std::string text = plan_to_json(plan);
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    if (!f) throw InvalidArgument("cannot write '" + o.output + "'");
    f << text;
  }
  if (o.json)
    out << text;
  else
    out << plan_summary(plan) << validate_plan(plan).str();
  return ok;
}

int cmd_search(const Options& o, std::ostream& out) {
  if (o.plan_path.empty()) throw InvalidArgument("--plan is required");
  const ConstructionPlan plan = plan_from_json(read_file(o.plan_path));
  const ValidationReport rep = validate_plan(plan);
  if (!rep.passed()) throw InvalidArgument("plan failed validation:\n" + rep.str());
  return emit_outcome(o, plan, find_hit(plan, search_config(o)), out);
}

int cmd_run(const Options& o, std::ostream& out) {
  const ConstructionPlan plan = make_plan(o);
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    f << plan_to_json(plan);
  }
  return emit_outcome(o, plan, find_hit(plan, search_config(o)), out);
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.p.empty()) throw InvalidArgument("--p is required");
  const BigInt p = parse_bigint(o.p);
  const auto verdicts = verify_primality(p, parse_offsets(o.betas.empty() ? "0" : o.betas, "--betas"));
  bool all = true;
  Json j{{"version", "verify-v1"}, {"p", to_decimal(p)}};
  Json pr = Json::array();
  for (const auto& v : verdicts) {
    all = all && v.is_prime();
    pr.push_back({{"verdict", to_string(v.verdict)}, {"method", to_string(v.method)}});
    if (!o.json) out << to_string(v.verdict) << " (" << to_string(v.method) << ")\n";
  }
  j["primality"] = pr;
  if (!o.pair.empty()) {
    const auto pair = parse_offsets(o.pair, "--pair");
    if (pair.size() != 2) throw InvalidArgument("--pair takes two offsets a1,a2");
    FactoringBudget budget;
    budget.rho_iteration_cap = o.budget_rho;
    const auto r = verify_ratio(p, pair[0], pair[1], resolve_function(o.function, o.h_power),
                                o.digits, budget);
    j["complete"] = r.complete;
    if (r.complete) {
      j["ratio"] = r.ratio->str();
      j["decimal"] = r.decimal;
      if (!o.json) out << "ratio = " << r.decimal << "\n";
    } else {
      all = false;
      j["partial_reason"] = r.partial_reason;
      if (!o.json) out << "partial: " << r.partial_reason << "\n";
    }
  }
  if (o.json) out << j.dump(2) << "\n";
  return all ? ok : mismatch;
}

int cmd_reproduce(const Options& o, std::ostream& out) {
  FactoringBudget budget;
  budget.rho_iteration_cap = o.budget_rho;
  const RowReport rep = reproduce_table(o.table, o.row, budget, o.digits);
  out << (o.json ? rep.json() : rep.str());
  return rep.passed() ? ok : mismatch;
}

} // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiplicative functions at shifted prime tuples", "mftuple"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json, "Emit versioned JSON");
    sub->add_flag("--seedless", o.seedless, "Only deterministic primality bases");
    sub->add_option("--extra-rounds", o.extra_rounds, "Extra random-base Miller-Rabin rounds");
    sub->add_option("--digits", o.digits, "Decimal places in reports")->check(CLI::Range(1u, 10000u));
  };
  auto function = [&](CLI::App* sub) {
    sub->add_option("--function", o.function, "phi, sigma, phi_over_n, sigma_over_n, n_over_sigma, exp_valuation");
    sub->add_option("--h-power", o.h_power, "Exponent j of the scaling h(n) = n^j");
  };
  auto goal = [&](CLI::App* sub) {
    function(sub);
    sub->add_option("--alphas", o.alphas, "Shift offsets, comma separated")->required();
    sub->add_option("--betas", o.betas, "Primality offsets, comma separated")->required();
    sub->add_option("--targets", o.targets, "Targets as decimals or a/b, comma separated")->required();
    sub->add_option("--epsilon", o.epsilon, "Relative tolerance in (0,1)");
    sub->add_option("--mode", o.mode, "value, ratio-anchored or ratio-consecutive")
        ->check(CLI::IsMember({"value", "ratio-anchored", "ratio-consecutive"}));
    sub->add_option("-o,--output", o.output, "Write the plan JSON here");
  };
  auto search = [&](CLI::App* sub) {
    sub->add_option("--sieve-bound", o.sieve_bound)->check(CLI::PositiveNumber);
    sub->add_option("--segment-length", o.segment_length)->check(CLI::PositiveNumber);
    sub->add_option("--max-segments", o.max_segments)->check(CLI::PositiveNumber);
    sub->add_option("--t-start", o.t_start);
    sub->add_option("--workers", o.workers)->check(CLI::Range(1u, 256u));
    sub->add_option("--time-limit", o.time_limit, "Seconds; 0 for none");
  };

  auto* adm = app.add_subcommand("admissible", "Check a tuple for admissibility");
  adm->add_option("--tuple", o.tuple, "Offsets, comma separated");
  adm->add_option("--betas", o.betas, "Alias of --tuple");
  common(adm);

  auto* apx = app.add_subcommand("approximate", "Squarefree coprime w_i with f(w_i) near targets");
  function(apx);
  apx->add_option("--targets", o.targets)->required();
  apx->add_option("--tolerance", o.tolerance)->required();
  apx->add_option("--avoid", o.avoid, "Primes to avoid, comma separated");
  common(apx);

  auto* con = app.add_subcommand("construct", "Build a plan");
  goal(con);
  common(con);

  auto* sea = app.add_subcommand("search", "Search a plan for a hit");
  sea->add_option("--plan", o.plan_path)->required();
  search(sea);
  common(sea);

  auto* run = app.add_subcommand("run", "Construct and search");
  goal(run);
  search(run);
  common(run);

  auto* ver = app.add_subcommand("verify", "Check p + beta_j for primality and a ratio claim");
  ver->add_option("--p", o.p)->required();
  ver->add_option("--betas", o.betas);
  ver->add_option("--pair", o.pair, "a1,a2 for g(p+a2)/g(p+a1)");
  ver->add_option("--budget-rho", o.budget_rho);
  function(ver);
  common(ver);

  auto* rep = app.add_subcommand("reproduce-table", "Reproduce a row of the tables");
  rep->add_option("--table", o.table)->required();
  rep->add_option("--row", o.row)->required();
  rep->add_option("--budget-rho", o.budget_rho);
  common(rep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return usage;
  }

  try {
    if (*adm) return cmd_admissible(o, out);
    if (*apx) return cmd_approximate(o, out);
    if (*con) return cmd_construct(o, out);
    if (*sea) return cmd_search(o, out);
    if (*run) return cmd_run(o, out);
    if (*ver) return cmd_verify(o, out);
    if (*rep) return cmd_reproduce(o, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return mismatch;
  }
  return usage;
}

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"mftuple"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace mft::cli
