#include "mftuple/verify.hpp"

#include <chrono>
#include <future>
#include <sstream>

#include "json_codec.hpp"
#include "mftuple/error.hpp"

namespace mft {

namespace detail {
extern const std::string_view kTablesJson;
}

using codec::Json;

namespace {

struct Tables {
  std::vector<TableRow> rows;
  std::vector<ReferenceConstant> constants;
};

const Tables& tables() {
  static const Tables t = [] {
    Tables out;
    const Json j = Json::parse(detail::kTablesJson);
    for (const auto& [name, c] : j.at("constants").items())
      out.constants.push_back({name, c.at("digits").get<std::string>(), c.at("source").get<std::string>()});
    for (const auto& r : j.at("rows")) {
      TableRow row;
      row.table = r.at("table").get<std::string>();
      row.name = r.at("name").get<std::string>();
      row.p = parse_bigint(r.at("p").get<std::string>());
      row.betas = r.at("betas").get<std::vector<std::int64_t>>();
      row.alphas = r.at("alphas").get<std::vector<std::int64_t>>();
      for (const auto& c : r.at("claims")) {
        TableClaim claim;
        claim.a1 = c.at("pair").at(0).get<std::int64_t>();
        claim.a2 = c.at("pair").at(1).get<std::int64_t>();
        claim.printed = c.at("printed").get<std::string>();
        claim.underlined = c.at("underlined").get<std::string>();
        claim.underlined_count = c.at("underlined_count").get<unsigned>();
        claim.constant = c.at("constant").get<std::string>();
        row.claims.push_back(std::move(claim));
      }
      out.rows.push_back(std::move(row));
    }
    return out;
  }();
  return t;
}

BigInt shifted(const BigInt& p, std::int64_t a) {
  BigInt r;
  mpz_set_si(r.get_mpz_t(), a);
  return p + r;
}

std::string shift_label(std::int64_t a) {
  return a < 0 ? "p" + std::to_string(a) : "p+" + std::to_string(a);
}

} // namespace

const std::vector<TableRow>& table_rows() { return tables().rows; }
const std::vector<ReferenceConstant>& reference_constants() { return tables().constants; }

const ReferenceConstant& reference_constant(const std::string& name) {
  for (const auto& c : reference_constants())
    if (c.name == name) return c;
  throw InvalidArgument("unknown reference constant '" + name + "'");
}

const TableRow& find_row(const std::string& table, const std::string& row) {
  std::string t = table;
  if (t == "1" || t == "2") t = "T" + t;
  if (t != "T1" && t != "T2") throw InvalidArgument("unknown table '" + table + "' (1 or 2)");
  std::vector<const TableRow*> rows;
  for (const auto& r : table_rows())
    if (r.table == t) rows.push_back(&r);
  for (const auto* r : rows)
    if (r->name == row) return *r;
  if (!row.empty() && row.find_first_not_of("0123456789") == std::string::npos) {
    const auto idx = std::stoul(row);
    if (idx >= 1 && idx <= rows.size()) return *rows[idx - 1];
  }
  std::string names;
  for (const auto* r : rows) names += (names.empty() ? "" : ", ") + r->name;
  throw InvalidArgument("unknown row '" + row + "' in " + t + " (rows: " + names + ")");
}

std::vector<PrimalityResult> verify_primality(const BigInt& p, const std::vector<std::int64_t>& betas) {
  std::vector<PrimalityResult> out;
  for (auto b : betas) {
    const BigInt v = shifted(p, b);
    out.push_back(v < 0 ? PrimalityResult{Verdict::composite, PrimalityMethod::trial_division, "negative"}
                        : is_prime(v));
  }
  return out;
}

RatioVerification verify_ratio(const BigInt& p, std::int64_t a1, std::int64_t a2,
                               const ScaledFunction& g, unsigned digits,
                               const FactoringBudget& budget) {
  const auto start = std::chrono::steady_clock::now();
  RatioVerification out;
  const BigInt v1 = shifted(p, a1), v2 = shifted(p, a2);
  if (v1 <= 0 || v2 <= 0) throw InvalidArgument("verify_ratio: shifted values must be positive");
  auto second = std::async(std::launch::async, [&] { return factor(v2, budget); });
  out.n1 = factor(v1, budget);
  out.n2 = second.get();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto* n : {&out.n1, &out.n2})
    if (!n->fully_factored()) {
      out.partial_reason = "could not factor the cofactor " + to_decimal(n->cofactor()) + " of " +
                           to_decimal(n->value());
      return out;
    }
  out.complete = true;
  PositiveValue r = eval_factored(g.f, out.n2) / eval_factored(g.f, out.n1);
  r *= PositiveValue(Rational(v2, v1)).pow(g.h_power);
  out.ratio = r;
  out.decimal = to_decimal(r, digits, DecimalMode::truncate);
  return out;
}

bool RowReport::passed() const {
  if (!primality_ok) return false;
  for (const auto& c : claims)
    if (c.status != "pass") return false;
  return true;
}

std::string RowReport::str() const {
  std::ostringstream os;
  os << row->table << " " << row->name << "  p = " << to_decimal(row->p) << "\n";
  for (std::size_t i = 0; i < primality.size(); ++i)
    os << "  " << shift_label(row->betas[i]) << ": " << to_string(primality[i].verdict) << "\n";
  for (const auto& c : claims) {
    os << "  phi(" << shift_label(c.claim.a2) << ")/phi(" << shift_label(c.claim.a1) << ") = ";
    if (c.ratio.complete)
      os << c.ratio.decimal << "\n    underlined " << c.claim.underlined << " ("
         << c.claim.underlined_count << " digits), matched vs " << c.claim.constant << ": "
         << c.matched_vs_constant;
    else
      os << "partial: " << c.ratio.partial_reason;
    os << "  [" << c.status << "]\n";
  }
  os << (passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string RowReport::json() const {
  Json j = Json::object();
  j["version"] = "table-report-v1";
  j["table"] = row->table;
  j["row"] = row->name;
  j["p"] = codec::big(row->p);
  Json pr = Json::array();
  for (std::size_t i = 0; i < primality.size(); ++i) {
    Json v = codec::primality(primality[i]);
    v["beta"] = row->betas[i];
    pr.push_back(std::move(v));
  }
  j["primality"] = std::move(pr);
  Json cl = Json::array();
  for (const auto& c : claims) {
    Json v = Json::object();
    v["pair"] = {c.claim.a1, c.claim.a2};
    v["status"] = c.status;
    v["underlined"] = c.claim.underlined;
    v["underlined_count"] = c.claim.underlined_count;
    v["constant"] = c.claim.constant;
    if (c.ratio.complete) {
      v["ratio"] = codec::value(*c.ratio.ratio);
      v["decimal"] = c.ratio.decimal;
      v["matched_digits"] = c.matched_vs_constant;
      v["factorizations"] = {codec::factored(c.ratio.n1), codec::factored(c.ratio.n2)};
    } else {
      v["partial_reason"] = c.ratio.partial_reason;
    }
    v["seconds"] = c.ratio.seconds;
    cl.push_back(std::move(v));
  }
  j["claims"] = std::move(cl);
  j["passed"] = passed();
  return j.dump(2) + "\n";
}

RowReport reproduce_table(const std::string& table, const std::string& row,
                          const FactoringBudget& budget, unsigned digits) {
  RowReport rep;
  rep.row = &find_row(table, row);
  rep.primality = verify_primality(rep.row->p, rep.row->betas);
  rep.primality_ok = true;
  for (const auto& r : rep.primality) rep.primality_ok = rep.primality_ok && r.is_prime();
  const ScaledFunction phi = resolve_function("phi");
  for (const auto& claim : rep.row->claims) {
    ClaimReport c;
    c.claim = claim;
    c.ratio = verify_ratio(rep.row->p, claim.a1, claim.a2, phi, digits, budget);
    if (!c.ratio.complete) {
      c.status = "partial";
    } else {
      c.prefix_ok = c.ratio.decimal.rfind(claim.underlined, 0) == 0;
      c.matched_vs_constant =
          count_matching_digits(c.ratio.decimal, reference_constant(claim.constant).digits);
      c.status = c.prefix_ok && c.matched_vs_constant >= claim.underlined_count ? "pass" : "fail";
    }
    rep.claims.push_back(std::move(c));
  }
  return rep;
}

} // namespace mft
