#pragma once

#include <string>

#include "dj/scalar.hpp"

namespace dj {

// Parses the scalar expression language over a chart's generators:
// integer literals, `i`, `tau`, coordinate and unit names, + - * /,
// ^ with (possibly negative) integer exponents, parentheses.
// Raises Errc::ParseError with a position, or Errc::UnknownCoordinate
// for names off the chart.
Scalar parse_scalar(const std::string& text, const ChartPtr& chart);

} // namespace dj
