#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mftuple/factor.hpp"
#include "mftuple/multiplicative.hpp"
#include "mftuple/primality.hpp"

namespace mft {

struct TableClaim {
  std::int64_t a1 = 0, a2 = 0;  ///< ratio g(p + a2) / g(p + a1)
  std::string printed;          ///< digits as printed
  std::string underlined;       ///< the underlined prefix
  unsigned underlined_count = 0;
  std::string constant;         ///< key into the constants table
};

struct TableRow {
  std::string table;  ///< "T1" or "T2"
  std::string name;
  BigInt p;
  std::vector<std::int64_t> betas;
  std::vector<std::int64_t> alphas;
  std::vector<TableClaim> claims;
};

struct ReferenceConstant {
  std::string name;
  std::string digits;  ///< 40 significant digits
  std::string source;
};

/// Embedded rows of both tables, in printed order.
const std::vector<TableRow>& table_rows();
const std::vector<ReferenceConstant>& reference_constants();
const ReferenceConstant& reference_constant(const std::string& name);
/// Row by table ("1", "2", "T1", "T2") and name or 1-based index.
const TableRow& find_row(const std::string& table, const std::string& row);

std::vector<PrimalityResult> verify_primality(const BigInt& p, const std::vector<std::int64_t>& betas);

struct RatioVerification {
  bool complete = false;        ///< both shifted values fully factored
  FactoredInteger n1, n2;       ///< p + a1, p + a2
  std::optional<PositiveValue> ratio;
  std::string decimal;          ///< truncated to `digits` places
  std::string partial_reason;   ///< names the unfactored value
  double seconds = 0;
};

/// g(p + a2) / g(p + a1) with g = f n^h_power, from independent factorizations
/// of both values (run concurrently).
RatioVerification verify_ratio(const BigInt& p, std::int64_t a1, std::int64_t a2,
                               const ScaledFunction& g, unsigned digits,
                               const FactoringBudget& budget = {});

struct ClaimReport {
  TableClaim claim;
  RatioVerification ratio;
  unsigned matched_vs_constant = 0;
  bool prefix_ok = false;  ///< rendering starts with the underlined prefix
  std::string status;      ///< "pass", "fail" or "partial"
};

struct RowReport {
  const TableRow* row = nullptr;
  std::vector<PrimalityResult> primality;
  bool primality_ok = false;
  std::vector<ClaimReport> claims;
  bool passed() const;
  std::string str() const;
  std::string json() const;
};

RowReport reproduce_table(const std::string& table, const std::string& row,
                          const FactoringBudget& budget = {}, unsigned digits = 30);

} // namespace mft
