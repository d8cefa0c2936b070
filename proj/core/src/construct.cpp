#include "mftuple/construct.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "mftuple/crt.hpp"
#include "mftuple/error.hpp"
#include "mftuple/sieve.hpp"

namespace mft {

namespace {

BigInt ipow(std::uint64_t p, unsigned k) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, k);
  return r;
}

BigInt from_i64(std::int64_t v) {
  BigInt r;
  mpz_set_si(r.get_mpz_t(), v);
  return r;
}

// Rational lower/upper bounds, exact when v is rational.
Rational lower_bound(const PositiveValue& v) {
  return v.is_exact() ? v.coefficient() : rational_enclosure(v, 40).first;
}
Rational upper_bound(const PositiveValue& v) {
  return v.is_exact() ? v.coefficient() : rational_enclosure(v, 40).second;
}

std::string join(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

} // namespace

std::string LinearPolynomial::str() const {
  std::string out = leading == 1 ? "t" : to_decimal(leading) + "t";
  if (sgn(constant) > 0) out += " + " + to_decimal(constant);
  if (sgn(constant) < 0) out += " - " + to_decimal(BigInt(-constant));
  return out;
}

Frame compute_frame(std::size_t m, std::size_t d) {
  if (m < 1 || d < 1) throw InvalidArgument("compute_frame: m and d must be positive");
  Frame f;
  f.small_primes = primes_upto(m + d);
  f.L = f.small_primes.size();
  f.s = static_cast<unsigned>(std::bit_width(d));
  return f;
}

RadiusResult compute_r(const MultiplicativeFunction& f, std::size_t m, std::size_t d) {
  const Frame frame = compute_frame(m, d);
  // f is multiplicative over the distinct p_j, so the minimum splits per prime.
  RadiusResult out;
  for (auto p : frame.small_primes) {
    PositiveValue best = PositiveValue::one();
    unsigned arg = 0;
    for (unsigned x = 1; x <= frame.s; ++x) {
      PositiveValue v = f.at(from_u64(p), x);
      if (compare(v, best) == std::strong_ordering::less) {
        best = v;
        arg = x;
      }
    }
    out.value *= best;
    out.argmin.push_back(arg);
  }
  return out;
}

ResidueData compute_offsets(const TupleSpec& spec, const Frame& frame) {
  if (!spec.admissible())
    throw InvalidArgument("inadmissible at p=" + std::to_string(*spec.certificate().obstruction));
  ResidueData out;
  for (auto p : frame.small_primes) {
    const std::uint64_t b = find_nonvanishing_residue(spec.betas(), p);
    const BigInt ps = ipow(p, frame.s);
    const BigInt ps1 = ps * p;
    std::optional<std::uint64_t> e;
    for (std::uint64_t cand = 0; BigInt(from_u64(cand)) < ps; ++cand) {
      bool ok = true;
      for (auto a : spec.alphas()) {
        BigInt v = from_i64(a) + from_u64(cand) * p + b;
        if (mpz_divisible_p(v.get_mpz_t(), ps1.get_mpz_t())) {
          ok = false;
          break;
        }
      }
      if (ok) {
        e = cand;
        break;
      }
    }
    if (!e) throw Error("compute_offsets: no valid e for p=" + std::to_string(p));
    out.b.push_back(b);
    out.e.push_back(*e);
  }
  out.x.assign(spec.d(), std::vector<unsigned>(frame.L));
  for (std::size_t i = 0; i < spec.d(); ++i)
    for (std::size_t j = 0; j < frame.L; ++j) {
      const auto p = frame.small_primes[j];
      BigInt v = from_i64(spec.alphas()[i]) + from_u64(out.e[j]) * p + out.b[j];
      out.x[i][j] = valuation(abs(v), from_u64(p));
    }
  return out;
}

std::string to_string(GoalMode m) {
  switch (m) {
    case GoalMode::value: return "value";
    case GoalMode::ratio_anchored: return "ratio-anchored";
    case GoalMode::ratio_consecutive: return "ratio-consecutive";
  }
  return "?";
}

GoalMode goal_mode_from_string(const std::string& s) {
  if (s == "value") return GoalMode::value;
  if (s == "ratio-anchored") return GoalMode::ratio_anchored;
  if (s == "ratio-consecutive") return GoalMode::ratio_consecutive;
  throw InvalidArgument("unknown mode '" + s + "' (value, ratio-anchored, ratio-consecutive)");
}

std::vector<Rational> consecutive_to_anchored(const std::vector<Rational>& y) {
  std::vector<Rational> x;
  Rational prod(1);
  for (const auto& v : y) {
    if (v.sign() <= 0) throw InvalidArgument("ratio targets must be positive, got " + v.str());
    prod *= v;
    x.push_back(prod.reciprocal());
  }
  return x;
}

std::vector<Rational> anchored_to_consecutive(const std::vector<Rational>& x) {
  std::vector<Rational> y;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].sign() <= 0) throw InvalidArgument("ratio targets must be positive, got " + x[i].str());
    y.push_back(i == 0 ? x[0].reciprocal() : x[i - 1] / x[i]);
  }
  return y;
}

std::vector<Rational> ratio_to_value_targets(const std::vector<Rational>& ratio_targets,
                                             const Rational& r_lower, RatioForm form) {
  if (r_lower.sign() <= 0) throw InvalidArgument("ratio_to_value_targets: r must be positive");
  for (const auto& v : ratio_targets)
    if (v.sign() <= 0) throw InvalidArgument("ratio targets must be positive, got " + v.str());
  const std::vector<Rational> anchored =
      form == RatioForm::anchored ? ratio_targets : consecutive_to_anchored(ratio_targets);
  Rational rho(1);
  for (const auto& v : anchored) rho = std::max(rho, v);
  const Rational x1 = std::min(r_lower / rho, r_lower) / Rational(2);
  std::vector<Rational> out{x1};
  for (const auto& v : anchored) out.push_back(x1 * v);
  for (const auto& v : out)
    if (v.sign() <= 0 || v >= r_lower) throw Error("ratio_to_value_targets: target left (0, r)");
  return out;
}

MultiplicativeFunction ConstructionPlan::function() const {
  return inverted ? reciprocal(oriented) : oriented;
}

BigInt ConstructionPlan::smooth_part(std::size_t i) const {
  BigInt out = 1;
  for (std::size_t j = 0; j < L; ++j) out *= ipow(small_primes[j], x[i][j]);
  return out;
}

std::vector<std::uint64_t> excluded_primes(const TupleSpec& spec, const Frame& frame) {
  std::set<std::uint64_t> out(frame.small_primes.begin(), frame.small_primes.end());
  auto add = [&](const BigInt& v) {
    if (sgn(v) == 0) return;
    const FactoredInteger fi = factor(abs(v));
    for (const auto& pp : fi.all_prime_powers()) {
      if (!fits_u64(pp.prime)) throw LimitExceeded("offset difference has a prime above 2^64");
      out.insert(to_u64(pp.prime));
    }
  };
  const auto& a = spec.alphas();
  for (std::size_t i = 0; i < a.size(); ++i) {
    add(from_i64(a[i]));
    for (auto beta : spec.betas()) add(from_i64(a[i]) - from_i64(beta));
    for (std::size_t k = i + 1; k < a.size(); ++k) add(from_i64(a[i]) - from_i64(a[k]));
  }
  return {out.begin(), out.end()};
}

ConstructionPlan build_plan(const MultiplicativeFunction& f, const TupleSpec& spec,
                            const std::vector<Rational>& value_targets, const Rational& epsilon,
                            const PlanLimits& limits) {
  if (f.divergence != Divergence::to_zero)
    throw InvalidArgument("build_plan: function '" + f.name + "' must be oriented toward zero");
  if (epsilon.sign() <= 0 || epsilon >= Rational(1))
    throw InvalidArgument("epsilon must lie in (0, 1), got " + epsilon.str());
  if (value_targets.size() != spec.d())
    throw InvalidArgument("expected " + std::to_string(spec.d()) + " targets, got " +
                          std::to_string(value_targets.size()));

  ConstructionPlan plan;
  plan.spec = spec;
  plan.function_name = f.name;
  plan.inverted = f.reciprocal;
  plan.oriented = f;

  const Frame frame = compute_frame(spec.m(), spec.d());
  plan.L = frame.L;
  plan.s = frame.s;
  plan.small_primes = frame.small_primes;
  plan.r = compute_r(f, spec.m(), spec.d()).value;
  for (const auto& xi : value_targets) {
    if (xi.sign() <= 0)
      throw InvalidArgument("targets must be positive; a zero target gives an empty interval");
    if (compare(PositiveValue(xi), plan.r) == std::strong_ordering::greater)
      throw InvalidArgument("target " + xi.str() + " exceeds r = " + plan.r.str() + " (" +
                            to_decimal(plan.r, 12) + ")");
  }
  plan.targets = value_targets;
  plan.epsilon = epsilon;

  ResidueData res = compute_offsets(spec, frame);
  plan.b = std::move(res.b);
  plan.e = std::move(res.e);
  plan.x = std::move(res.x);

  std::vector<Rational> centers, tolerances;
  for (std::size_t i = 0; i < spec.d(); ++i) {
    std::vector<PrimePower> pp;
    for (std::size_t j = 0; j < plan.L; ++j)
      if (plan.x[i][j]) pp.push_back({from_u64(plan.small_primes[j]), plan.x[i][j]});
    const PositiveValue F = eval_prime_powers(f, pp);
    const PositiveValue lo_v = PositiveValue(value_targets[i] * (Rational(1) - epsilon)) / F;
    const PositiveValue hi_v = PositiveValue(value_targets[i] * (Rational(1) + epsilon)) / F;
    Rational lo = upper_bound(lo_v);
    Rational hi = std::min(lower_bound(hi_v), Rational(1));
    if (lo >= hi)
      throw Error("interval I_" + std::to_string(i + 1) + " is degenerate after clipping to (0,1)");
    plan.intervals.emplace_back(lo, hi);
    // f(g(t)) < 1 only pulls values down, so aim near the top of the interval:
    // f(w) lands in [hi - width/4, hi - width/8].
    const Rational width = hi - lo;
    centers.push_back(hi - width / Rational(4));
    tolerances.push_back(width / Rational(8));
  }

  const auto avoid_list = excluded_primes(spec, frame);
  const std::set<std::uint64_t> avoid(avoid_list.begin(), avoid_list.end());
  const auto ws = approx_tuple(f, centers, avoid, tolerances, limits.approx);

  double modulus_bits = 0;
  for (const auto& wr : ws) modulus_bits += 2.0 * static_cast<double>(bit_length(wr.w.value()));
  for (auto p : plan.small_primes) modulus_bits += (plan.s + 1) * std::log2(static_cast<double>(p));
  if (modulus_bits > static_cast<double>(limits.max_modulus_bits))
    throw LimitExceeded("modulus M would have about " + std::to_string(std::lround(modulus_bits)) +
                        " bits, above max_modulus_bits " +
                        std::to_string(limits.max_modulus_bits));

  std::vector<Congruence> cong;
  for (std::size_t j = 0; j < plan.L; ++j) {
    const auto p = plan.small_primes[j];
    cong.push_back({from_u64(plan.e[j]) * p + plan.b[j], ipow(p, plan.s + 1)});
  }
  for (std::size_t i = 0; i < ws.size(); ++i) {
    plan.w.push_back(ws[i].w);
    const BigInt& w = ws[i].w.value();
    BigInt r = w - from_i64(spec.alphas()[i]);
    cong.push_back({r, BigInt(w * w)});
  }
  const CrtSolution sol = crt(cong);
  plan.c = sol.solution;
  plan.M = sol.modulus;
  plan.h0 = {plan.M, plan.c};
  for (auto beta : spec.betas()) plan.h.push_back({plan.M, plan.c + from_i64(beta)});
  for (std::size_t i = 0; i < spec.d(); ++i) {
    const BigInt div = plan.w[i].value() * plan.smooth_part(i);
    const BigInt num = plan.c + from_i64(spec.alphas()[i]);
    BigInt a, k;
    mpz_divexact(a.get_mpz_t(), plan.M.get_mpz_t(), div.get_mpz_t());
    mpz_fdiv_q(k.get_mpz_t(), num.get_mpz_t(), div.get_mpz_t());
    plan.g.push_back({a, k});
  }
  plan.goal.mode = GoalMode::value;
  plan.goal.targets = value_targets;
  plan.goal.epsilon = epsilon;

  const ValidationReport report = validate_plan(plan);
  if (!report.passed()) throw Error("constructed plan failed validation:\n" + report.str());
  return plan;
}

ConstructionPlan plan_for_goal(const std::string& function_name, const TupleSpec& spec,
                               const Goal& goal, const PlanLimits& limits) {
  const MultiplicativeFunction f = builtin(function_name);
  const bool inverted = f.divergence == Divergence::to_infinity;
  const MultiplicativeFunction fo = oriented(f);
  if (goal.epsilon.sign() <= 0 || goal.epsilon >= Rational(1))
    throw InvalidArgument("epsilon must lie in (0, 1), got " + goal.epsilon.str());
  for (const auto& t : goal.targets)
    if (t.sign() <= 0) throw InvalidArgument("targets must be positive, got " + t.str());

  std::vector<Rational> targets;
  Rational eps;
  if (goal.mode == GoalMode::value) {
    if (goal.targets.size() != spec.d())
      throw InvalidArgument("value mode needs " + std::to_string(spec.d()) + " targets");
    for (const auto& t : goal.targets) targets.push_back(inverted ? t.reciprocal() : t);
    // 1/f within (1 +- eps/(1+eps)) of 1/xi keeps f within (1 +- eps) of xi.
    eps = inverted ? goal.epsilon / (Rational(1) + goal.epsilon) : goal.epsilon;
  } else {
    if (spec.d() < 2) throw InvalidArgument("ratio modes need at least two alphas");
    if (goal.targets.size() + 1 != spec.d())
      throw InvalidArgument("ratio mode needs " + std::to_string(spec.d() - 1) + " targets");
    std::vector<Rational> anchored = goal.mode == GoalMode::ratio_anchored
                                         ? goal.targets
                                         : consecutive_to_anchored(goal.targets);
    if (inverted)
      for (auto& v : anchored) v = v.reciprocal();
    const PositiveValue r = compute_r(fo, spec.m(), spec.d()).value;
    targets = ratio_to_value_targets(anchored, lower_bound(r), RatioForm::anchored);
    // Value errors of eps/8 keep every ratio, in either orientation, within eps.
    eps = goal.epsilon / Rational(8);
  }
  ConstructionPlan plan = build_plan(fo, spec, targets, eps, limits);
  plan.function_name = function_name;
  plan.inverted = inverted;
  plan.goal = goal;
  return plan;
}

bool ValidationReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (const auto& e : entries) {
    os << (e.passed ? "pass " : "FAIL ") << e.check;
    if (!e.detail.empty()) os << ": " << e.detail;
    os << '\n';
  }
  return os.str();
}

ValidationReport validate_plan(const ConstructionPlan& plan) {
  ValidationReport rep;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    rep.entries.push_back({std::move(name), ok, std::move(detail)});
  };
  const auto& spec = plan.spec;
  const std::size_t d = spec.d(), m = spec.m();
  const MultiplicativeFunction& f = plan.oriented;

  const bool shapes = plan.x.size() == d && plan.b.size() == plan.L && plan.e.size() == plan.L &&
                      plan.small_primes.size() == plan.L && plan.targets.size() == d &&
                      plan.intervals.size() == d && plan.w.size() == d && plan.h.size() == m &&
                      plan.g.size() == d &&
                      std::all_of(plan.x.begin(), plan.x.end(),
                                  [&](const auto& row) { return row.size() == plan.L; });
  add("shapes", shapes);
  if (!shapes) return rep;

  const Frame frame = compute_frame(m, d);
  add("frame", frame.L == plan.L && frame.s == plan.s && frame.small_primes == plan.small_primes,
      "L=" + std::to_string(plan.L) + " s=" + std::to_string(plan.s) + " primes=" +
          join(plan.small_primes));

  bool residues_ok = true;
  std::string residue_detail;
  for (std::size_t j = 0; j < plan.L && residues_ok; ++j) {
    const auto p = plan.small_primes[j];
    const BigInt ps1 = ipow(p, plan.s + 1);
    for (auto beta : spec.betas())
      if (residue(static_cast<std::int64_t>(plan.b[j]) + beta, p) == 0) {
        residues_ok = false;
        residue_detail = "p=" + std::to_string(p) + " divides b+beta";
      }
    for (std::size_t i = 0; i < d; ++i) {
      BigInt v = from_i64(spec.alphas()[i]) + from_u64(plan.e[j]) * p + plan.b[j];
      if (mpz_divisible_p(v.get_mpz_t(), ps1.get_mpz_t()) || plan.x[i][j] > plan.s ||
          valuation(abs(v), from_u64(p)) != plan.x[i][j]) {
        residues_ok = false;
        residue_detail = "x[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      }
    }
  }
  add("residues and exponents (x <= s)", residues_ok, residue_detail);

  bool targets_ok = plan.epsilon.sign() > 0 && plan.epsilon < Rational(1);
  for (const auto& t : plan.targets)
    targets_ok = targets_ok && t.sign() > 0 &&
                 compare(PositiveValue(t), plan.r) != std::strong_ordering::greater;
  add("targets in (0, r]", targets_ok, "r=" + plan.r.str());

  bool nonempty = true, sound = true, r_below = true, w_inside = true;
  for (std::size_t i = 0; i < d; ++i) {
    const auto& [lo, hi] = plan.intervals[i];
    nonempty = nonempty && lo.sign() >= 0 && lo < hi && hi <= Rational(1);
    std::vector<PrimePower> pp;
    for (std::size_t j = 0; j < plan.L; ++j)
      if (plan.x[i][j]) pp.push_back({from_u64(plan.small_primes[j]), plan.x[i][j]});
    const PositiveValue F = eval_prime_powers(f, pp);
    const Rational& xi = plan.targets[i];
    sound = sound && lo.sign() > 0 &&
            compare(F * PositiveValue(lo),
                    PositiveValue(xi * (Rational(1) - plan.epsilon))) !=
                std::strong_ordering::less &&
            compare(F * PositiveValue(hi), PositiveValue(xi * (Rational(1) + plan.epsilon))) !=
                std::strong_ordering::greater;
    r_below = r_below && compare(plan.r, F) != std::strong_ordering::greater;
    if (plan.w[i].fully_factored()) {
      const PositiveValue fw = eval_factored(f, plan.w[i]);
      w_inside = w_inside && compare(fw, lo) == std::strong_ordering::greater &&
                 compare(fw, hi) == std::strong_ordering::less;
    } else {
      w_inside = false;
    }
  }
  add("intervals nonempty", nonempty);
  add("interval soundness", sound);
  add("r <= F_i", r_below);
  add("f(w_i) inside I_i", w_inside);

  bool coprime = true;
  std::string coprime_detail;
  const auto avoid = excluded_primes(spec, frame);
  for (std::size_t i = 0; i < d; ++i) {
    const BigInt& wi = plan.w[i].value();
    if (!plan.w[i].squarefree()) {
      coprime = false;
      coprime_detail = "w_" + std::to_string(i + 1) + " not squarefree";
    }
    for (auto p : avoid)
      if (mod_u64(wi, p) == 0) {
        coprime = false;
        coprime_detail = "w_" + std::to_string(i + 1) + " divisible by " + std::to_string(p);
      }
    for (std::size_t k = i + 1; k < d; ++k) {
      BigInt gg;
      mpz_gcd(gg.get_mpz_t(), wi.get_mpz_t(), plan.w[k].value().get_mpz_t());
      if (gg != 1) {
        coprime = false;
        coprime_detail = "gcd(w_" + std::to_string(i + 1) + ", w_" + std::to_string(k + 1) + ") > 1";
      }
    }
  }
  add("w squarefree, pairwise coprime, avoiding P'", coprime, coprime_detail);

  BigInt M = 1;
  for (const auto& w : plan.w) M *= w.value() * w.value();
  for (auto p : plan.small_primes) M *= ipow(p, plan.s + 1);
  add("modulus", M == plan.M);

  bool crt_ok = sgn(plan.c) >= 0 && plan.c < plan.M;
  for (std::size_t j = 0; j < plan.L; ++j) {
    const auto p = plan.small_primes[j];
    BigInt diff = plan.c - (from_u64(plan.e[j]) * p + plan.b[j]);
    BigInt mod = ipow(p, plan.s + 1);
    crt_ok = crt_ok && mpz_divisible_p(diff.get_mpz_t(), mod.get_mpz_t());
  }
  for (std::size_t i = 0; i < d; ++i) {
    const BigInt& w = plan.w[i].value();
    BigInt diff = plan.c - (w - from_i64(spec.alphas()[i]));
    BigInt mod = w * w;
    crt_ok = crt_ok && mpz_divisible_p(diff.get_mpz_t(), mod.get_mpz_t());
  }
  add("CRT congruences", crt_ok);

  bool h_ok = plan.h0 == LinearPolynomial{plan.M, plan.c};
  for (std::size_t j = 0; j < m; ++j)
    h_ok = h_ok && plan.h[j] == LinearPolynomial{plan.M, plan.c + from_i64(spec.betas()[j])};
  add("h polynomials", h_ok);

  bool integral = true, identity = true, positive = sgn(plan.M) > 0;
  std::mt19937_64 rng(12345);
  for (std::size_t i = 0; i < d; ++i) {
    const BigInt div = plan.w[i].value() * plan.smooth_part(i);
    const BigInt num = plan.c + from_i64(spec.alphas()[i]);
    integral = integral && mpz_divisible_p(plan.M.get_mpz_t(), div.get_mpz_t()) &&
               mpz_divisible_p(num.get_mpz_t(), div.get_mpz_t());
    positive = positive && sgn(plan.g[i].leading) > 0;
    identity = identity && plan.g[i].leading * div == plan.M && plan.g[i].constant * div == num;
    for (int k = 0; k < 10; ++k) {
      const BigInt t = from_u64(rng() >> 4);
      identity = identity && plan.g[i](t) * div == plan.h0(t) + from_i64(spec.alphas()[i]);
    }
  }
  add("g coefficients integral", integral);
  add("polynomial identity g_i w_i prod p^x = h_0 + alpha_i", identity);
  add("positive leading coefficients", positive);

  bool nonvanishing = true;
  std::string nv_detail;
  for (auto p : primes_upto(m + d)) {
    bool found = false;
    for (std::uint64_t t = 0; t < p && !found; ++t) {
      bool all_nonzero = true;
      auto check = [&](const LinearPolynomial& q) {
        if (mod_u64(q(from_u64(t)), p) == 0) all_nonzero = false;
      };
      for (const auto& q : plan.h) check(q);
      for (const auto& q : plan.g) check(q);
      found = all_nonzero;
    }
    if (!found) {
      nonvanishing = false;
      nv_detail = "F vanishes identically mod " + std::to_string(p);
    }
  }
  add("F nonvanishing mod p <= m+d", nonvanishing, nv_detail);
  return rep;
}

} // namespace mft
