#pragma once

#include "mbp/canonical.hpp"
#include "mbp/reduce.hpp"
#include "mbp/weyr.hpp"

#include <nlohmann/json.hpp>

namespace mbp {

using Json = nlohmann::json;

inline constexpr const char* kProblemFormat = "mbp-problem-1";
inline constexpr const char* kRepFormat = "mbp-rep-1";
inline constexpr const char* kTraceFormat = "mbp-trace-1";

// Rationals as "p/q" or "p"; integers are accepted on input.
Json rational_json(const Rational& r);
Rational rational_from_json(const Json& j);
// Row-major nested arrays.
Json matrix_json(const RatMatrix& m);
RatMatrix matrix_from_json(const Json& j);
// Coefficients in ascending degree.
Json poly_json(const Poly& p);
Poly poly_from_json(const Json& j);
Json localized_json(const LocalizedElem& e);
LocalizedElem localized_from_json(const Json& j);

Json problem_json(const Problem& p);
// Throws ParseError on malformed input and InvalidProblem when validate() fails.
Problem problem_from_json(const Json& j);

// Solid values keyed by name, Weyr parts keyed by class name.
Json representation_json(const Problem& p, const Representation& r);
Representation representation_from_json(const Problem& p, const Json& j);

Json weyr_json(const RatMatrix& a);

// Parameters that rebuild the step with apply_step.
Json step_spec(const ReductionStep& step);
StepResult apply_step(const Problem& p, const Json& spec);

// Steps as {kind, arrow, B, G, size_map, localized_factors, links, spec, info}.
Json trace_json(const ReductionTrace& trace);
// Replays the specs of a trace; returns the steps taken.
ReductionTrace replay_trace(const Problem& p, const Json& trace);

Json canonical_json(const Problem& p, const CanonicalForm& cf);

}  // namespace mbp
