#pragma once

#include <string>
#include <vector>

#include "ahg/analysis.hpp"
#include "json.hpp"

namespace ahg {

using Json = nlohmann::ordered_json;

/// "√x", "x^(3/2)", "√(xy)", "x²y" style rendering for human-readable heads.
std::string format_monomial(const std::vector<Rational>& exponent, const std::vector<std::string>& names);
/// Polynomial in r with ascending powers, e.g. "r+2r²"; parenthesized when
/// `wrap` is set and there is more than one term.
std::string format_r_poly(const Poly& p, bool wrap = false);
/// "1 + 2r√x + (r+2r²)x + …"
std::string format_symbolic_head(const std::vector<SymbolicTerm>& terms, const std::vector<std::string>& names);

std::string format_branch(const BranchAssignment& b);
std::string format_certificate(const MismatchCertificate& c, const std::vector<std::string>& names);

Json certificate_to_json(const MismatchCertificate& c, const std::vector<std::string>& names);
MismatchCertificate certificate_from_json(const Json& j);

Json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const Json& j);
std::string render_verdict(const Verdict& v);

Json series_to_json(const PuiseuxSeries& s, const std::vector<std::string>& names);

Json census_to_json(const CensusReport& c);
std::string render_census(const CensusReport& c);

Json extract_to_json(const ExtractResult& x, const std::vector<std::string>& names);
std::string render_extract(const ExtractResult& x, const std::vector<std::string>& names, long head_weight);

}  // namespace ahg
