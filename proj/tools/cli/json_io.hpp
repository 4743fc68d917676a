#pragma once

#include "resurge/series.hpp"
#include "resurge/sympoly.hpp"

#include <json.hpp>

#include <vector>

namespace resurge::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaId = "resurge-output/1";

// Same fields as FormalSeries::to_text.
Json series_to_json(const FormalSeries& s);
FormalSeries series_from_json(const Json& j);

// {"re": "...", "im": "..."} with the canonical float text; "abs" added for convenience.
Json complex_to_json(const CF& z, int digits10 = 0);
Json exact_to_json(const CQ& z);
// Polynomial in L = 2 pi i, as text.
Json sympoly_to_json(const SymPoly& p);

// Rows of (order, re, im) for a coefficient table.
std::string series_to_csv(const FormalSeries& s, const std::string& label = "");

}  // namespace resurge::cli
