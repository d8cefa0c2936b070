#include "mftuple/tuples.hpp"

#include <set>
#include <string>

#include "mftuple/error.hpp"
#include "mftuple/sieve.hpp"

namespace mft {

namespace {

void require_distinct(const Offsets& v, const char* what) {
  std::set<std::int64_t> seen;
  for (auto x : v)
    if (!seen.insert(x).second)
      throw InvalidArgument(std::string("duplicate entry ") + std::to_string(x) + " in " + what);
}

} // namespace

AdmissibilityCertificate is_admissible(const Offsets& betas) {
  if (betas.empty()) throw InvalidArgument("admissibility of an empty tuple is undefined");
  require_distinct(betas, "tuple");
  AdmissibilityCertificate cert;
  cert.admissible = true;
  for (std::uint64_t p : primes_upto(betas.size())) {
    std::vector<bool> hit(p, false);
    for (auto b : betas) hit[residue(b, p)] = true;
    std::optional<std::uint64_t> missing;
    for (std::uint64_t r = 0; r < p && !missing; ++r)
      if (!hit[r]) missing = r;
    if (!missing) {
      cert.admissible = false;
      cert.obstruction = p;
      cert.missing_residues.clear();
      return cert;
    }
    cert.missing_residues.emplace_back(p, *missing);
  }
  return cert;
}

std::uint64_t find_nonvanishing_residue(const Offsets& betas, std::uint64_t p) {
  for (std::uint64_t b = 0; b < p; ++b) {
    bool vanishes = false;
    for (auto beta : betas)
      if ((b + residue(beta, p)) % p == 0) {
        vanishes = true;
        break;
      }
    if (!vanishes) return b;
  }
  throw InvalidArgument("inadmissible at p=" + std::to_string(p));
}

TupleSpec::TupleSpec(Offsets alphas, Offsets betas)
    : alphas_(std::move(alphas)), betas_(std::move(betas)) {
  if (alphas_.empty()) throw InvalidArgument("at least one alpha offset is required");
  if (betas_.empty()) throw InvalidArgument("at least one beta offset is required");
  require_distinct(alphas_, "alphas");
  require_distinct(betas_, "betas");
  for (auto a : alphas_)
    for (auto b : betas_)
      if (a == b)
        throw InvalidArgument("alpha and beta offsets must differ; both contain " +
                              std::to_string(a));
  certificate_ = is_admissible(betas_);
}

} // namespace mft
