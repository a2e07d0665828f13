#pragma once

#include "json.hpp"

#include "alambda/conservativity.hpp"

namespace alambda {

using Json = nlohmann::json;

// Machine-readable renderings: nested records with term kinds, children and
// exact coefficient strings. Every record round-trips losslessly; malformed
// input raises UsageError (or nlohmann's parse errors for invalid JSON).

Json to_json(const PurePtr& t);
PurePtr pure_from_json(const Json& j);

Json to_json(const SimplePtr& u);
SimplePtr simple_from_json(const Json& j, Semiring ring);

Json to_json(const AlgebraicTerm& s);
AlgebraicTerm alg_from_json(const Json& j);

Json to_json(const BetaTrace& t);
BetaTrace beta_trace_from_json(const Json& j);

Json to_json(const SimpleStepPtr& s);
SimpleStepPtr simple_step_from_json(const Json& j, Semiring ring);

Json to_json(const AlgStep& s);
AlgStep alg_step_from_json(const Json& j, Semiring ring);

/// Full trace record, carrying the semiring and the producing policy name.
Json to_json(const AlgTrace& t, std::string_view policy = "full");
AlgTrace alg_trace_from_json(const Json& j);

Json to_json(const DerivPtr& d);
DerivPtr deriv_from_json(const Json& j);

Json to_json(const Report& r);
Json to_json(const ConservativityCertificate& c);
Json to_json(const EquivEvidence& e);

} // namespace alambda
