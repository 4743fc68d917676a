#pragma once

#include "resurge/series.hpp"

#include <string_view>

namespace resurge::cli {

// Series literal: terms `c*z^-n` joined by + or -.  Coefficients are rationals
// ("3/4", "0.25", "1e-3") or parenthesized complex values ("(1/2-3i)"); the
// coefficient may be omitted ("z^-2") and so may the monomial ("5").  `z` alone
// is z^1.  For power-series variables the letter is `t` (or `zeta`, `b`) and
// exponents are non-negative.  Result is exact, truncated at
// max(truncation, highest order present).
FormalSeries parse_series_literal(std::string_view text, Variable var, int truncation);

}  // namespace resurge::cli
