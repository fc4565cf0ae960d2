#ifndef PICOH_IO_HPP
#define PICOH_IO_HPP

#include <json.hpp>

#include "picoh/cohomology.hpp"
#include "picoh/hierarchy.hpp"
#include "picoh/series.hpp"
#include "picoh/subspace.hpp"

namespace picoh {

using nlohmann::json;
using nlohmann::ordered_json;

// Self-describing documents with a top-level "kind" discriminator:
// "series", "operator" (an element of E), "subspace", "pair".

ordered_json dual_to_json(const DualNumber& d);
DualNumber dual_from_json(const json& j);

ordered_json series_to_json(const BiSeries<Rational>& s);
BiSeries<Rational> series_from_json(const json& j);

ordered_json operator_to_json(const EOp& op);
EOp operator_from_json(const json& j);

ordered_json pair_to_json(const ParshinPair& p);
ParshinPair pair_from_json(const json& j);

ordered_json subspace_to_json(const WindowedSubspace& w);
WindowedSubspace subspace_from_json(const json& j);

ordered_json report_to_json(const CohomologyReport& r, bool stable);

// Dispatch on "kind"; throws validation_error with a path diagnostic.
json load_document(const std::string& path);

} // namespace picoh

#endif
