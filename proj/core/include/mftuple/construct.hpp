#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mftuple/approx.hpp"
#include "mftuple/bigint.hpp"
#include "mftuple/factor.hpp"
#include "mftuple/multiplicative.hpp"
#include "mftuple/positive_value.hpp"
#include "mftuple/rational.hpp"
#include "mftuple/tuples.hpp"

namespace mft {

/// t -> leading * t + constant.
struct LinearPolynomial {
  BigInt leading = 1;
  BigInt constant = 0;

  BigInt operator()(const BigInt& t) const { return leading * t + constant; }
  std::string str() const;
  friend bool operator==(const LinearPolynomial&, const LinearPolynomial&) = default;
};

struct Frame {
  std::size_t L = 0;
  unsigned s = 0;
  std::vector<std::uint64_t> small_primes;
};

/// L = pi(m + d), s = floor(log2 d) + 1, the first L primes.
Frame compute_frame(std::size_t m, std::size_t d);

struct RadiusResult {
  PositiveValue value;
  /// Exponent vector attaining the minimum.
  std::vector<unsigned> argmin;
};

/// min f(prod p_j^{x_j}) over 0 <= x_j <= s.
RadiusResult compute_r(const MultiplicativeFunction& f, std::size_t m, std::size_t d);

struct ResidueData {
  std::vector<std::uint64_t> b;
  std::vector<std::uint64_t> e;
  std::vector<std::vector<unsigned>> x;  ///< d rows, L columns
};

ResidueData compute_offsets(const TupleSpec& spec, const Frame& frame);

enum class RatioForm { anchored, consecutive };
enum class GoalMode { value, ratio_anchored, ratio_consecutive };

std::string to_string(GoalMode m);
GoalMode goal_mode_from_string(const std::string& s);

/// Consecutive ratios (y_1..y_{d-1}) to anchored ones: x_i = 1 / (y_1 ... y_i).
std::vector<Rational> consecutive_to_anchored(const std::vector<Rational>& y);
/// Anchored to consecutive: y_1 = 1/x_1, y_i = x_{i-1} / x_i.
std::vector<Rational> anchored_to_consecutive(const std::vector<Rational>& x);

/// d value targets in (0, r) whose anchored ratios are the given ones.
/// `r_lower` is a rational lower bound for r (r itself when r is rational).
std::vector<Rational> ratio_to_value_targets(const std::vector<Rational>& ratio_targets,
                                             const Rational& r_lower, RatioForm form);

/// What a hit has to achieve, in terms of the original function.
struct Goal {
  GoalMode mode = GoalMode::value;
  std::vector<Rational> targets;  ///< d values, or d-1 ratios
  Rational epsilon;
  unsigned h_power = 0;
};

struct ConstructionPlan {
  TupleSpec spec{{1}, {0}};
  std::string function_name;
  /// True when the construction runs on 1/f.
  bool inverted = false;
  /// f, or 1/f when inverted.
  MultiplicativeFunction oriented;
  Goal goal;

  std::size_t L = 0;
  unsigned s = 0;
  std::vector<std::uint64_t> small_primes;
  std::vector<std::uint64_t> b, e;
  std::vector<std::vector<unsigned>> x;
  PositiveValue r;
  /// Value targets and epsilon for the oriented function.
  std::vector<Rational> targets;
  Rational epsilon;
  std::vector<std::pair<Rational, Rational>> intervals;
  std::vector<FactoredInteger> w;
  BigInt c;
  BigInt M;
  LinearPolynomial h0;
  std::vector<LinearPolynomial> h;
  std::vector<LinearPolynomial> g;

  const MultiplicativeFunction& oriented_function() const { return oriented; }
  /// The function the goal is stated in.
  MultiplicativeFunction function() const;
  /// prod_j p_j^{x_{i,j}}
  BigInt smooth_part(std::size_t i) const;
};

struct PlanLimits {
  ApproxLimits approx;
  std::size_t max_modulus_bits = std::size_t{1} << 20;
};

/// Full construction for value targets of the oriented function.
ConstructionPlan build_plan(const MultiplicativeFunction& f, const TupleSpec& spec,
                            const std::vector<Rational>& value_targets, const Rational& epsilon,
                            const PlanLimits& limits = {});

/// Front end for the CLI: converts a goal on f (values or ratios of g = f n^h)
/// into oriented value targets and builds the plan.
ConstructionPlan plan_for_goal(const std::string& function_name, const TupleSpec& spec,
                               const Goal& goal, const PlanLimits& limits = {});

struct ValidationEntry {
  std::string check;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  bool passed() const;
  std::string str() const;
};

ValidationReport validate_plan(const ConstructionPlan& plan);

/// Primes dividing the nonzero values among alpha_i, alpha_i - beta_j and
/// alpha_i - alpha_k, together with the small primes.
std::vector<std::uint64_t> excluded_primes(const TupleSpec& spec, const Frame& frame);

} // namespace mft
