#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "crnf/hypersurface.hpp"
#include "crnf/mapjet.hpp"
#include "crnf/normalform.hpp"
#include "crnf/series.hpp"

namespace crnf {

/// Insertion-ordered JSON: emitted reports are byte-deterministic because
/// key order is fixed by the serializers and term order is the canonical
/// monomial order of the series maps.
using Json = nlohmann::ordered_json;

/// Canonical single-string rendering of an exact complex rational
/// ("0", "p/q", "p/qi", "a+bi", "a-bi"); inverse of gaussq_parse.
std::string gaussq_str(const GaussQ& q);
/// Parses the rendering above; throws ParseError on malformed input.
GaussQ gaussq_parse(const std::string& s);

/// Term-list serialization: one object per monomial, keys
/// {"z","zeta","zbar","zetabar","u","re","im"}, exponents as integers and
/// coefficient components as canonical rational strings, in the canonical
/// monomial order.
Json serialize_terms(const WSeries& s);
/// Strict inverse: rejects unknown keys, duplicate or zero terms, and any
/// monomial outside tr. Throws ParseError.
WSeries parse_terms(const Json& arr, Trunc tr);

/// {"truncation": {"weight": W, "zeta_degree": D}, "form": ..., "phi": [...]}.
Json serialize_hypersurface(const Hypersurface& M);
/// Parses against the schema above. The declared truncation must agree with
/// every term; terms must also fit the working caps (weight_cap, zeta_cap).
/// A missing "form" defaults to perturbation_of_P. Throws ParseError.
Hypersurface parse_hypersurface(const Json& j, int weight_cap, int zeta_cap);

/// One object per holomorphic jet monomial: {"z","zeta","w","re","im"}.
Json serialize_hol_terms(const HolJet& f);
HolJet parse_hol_terms(const Json& arr, Trunc tr);

/// {"shape": "general"|"vspace", "f": [...], "g": [...], "h": [...]}.
Json serialize_map(const MapJet& H);
MapJet parse_map(const Json& j, Trunc tr);

Json serialize_nf_report(const NFReport& rep);
/// Re-reads a serialized normalization report (jets and series are restored
/// at the report's truncation).
NFReport parse_nf_report(const Json& j);

struct SphericityReport {
  bool spherical = false;
  GaussQ phi3002, phi5001;
};
Json serialize_sphericity(const SphericityReport& rep);
SphericityReport parse_sphericity(const Json& j);

struct VerifyReport {
  bool levi_residual_zero = false;
  bool normal_form_ok = false;
  bool reality_ok = false;
  NondegReport nondeg;
  bool all_ok() const {
    return levi_residual_zero && normal_form_ok && reality_ok &&
           nondeg.degenerate_to_order && nondeg.kernel_rank_ok &&
           nondeg.two_nondeg_witness;
  }
};
Json serialize_verify(const VerifyReport& rep);
VerifyReport parse_verify(const Json& j);

struct AlgebraReport {
  bool grading_ok = false;
  bool tangency_ok = false;
  int dim_g = 0;
  int dim_h = 0;
};
Json serialize_algebra(const AlgebraReport& rep);
AlgebraReport parse_algebra(const Json& j);

/// One batch job. weight_cap/zeta_cap are the reporting caps; normalization
/// pipelines internally zero-extend polynomial input to the zeta margin
/// needed for exactness of the reported window.
struct JobConfig {
  enum class Command { normalize, sphericity, reconstruct, verify, algebra_check };
  Command command = Command::normalize;
  std::string input_path;   // unused by algebra_check
  std::string output_path;  // empty: no report file is written
  int weight_cap = 8;
  int zeta_cap = 6;
  NFParams params;
  unsigned long seed = 0;  // reserved for batch property drivers
  bool quiet = false;
};

/// Runs one job: reads input_path (if the command takes input), writes the
/// JSON report to output_path (if given), prints a one-line summary to
/// stdout unless quiet. Returns the exit status (0 success; 2 when verify
/// finds a failed check). Throws ValidationError / ParseError / SolveError
/// for the caller to map onto exit codes 2 / 3 / 4.
int run(const JobConfig& cfg);

// Pipeline pieces behind run(), exposed for tests.
SphericityReport sphericity_of(const NFReport& rep);
VerifyReport verify_surface(const Hypersurface& M);
AlgebraReport algebra_check(Trunc tr);
/// Prenormalizes raw input if needed, zero-extends to the working margin,
/// normalizes, and truncates every component of the report back to
/// M.phi.trunc().
NFReport normalize_job(const Hypersurface& M, const NFParams& params);

}  // namespace crnf
