#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace noma::csv {

/// Locale-independent, 12 significant digits, '.' decimal point.
/// NaN renders as an empty field.
std::string number(double v);

std::string join(const std::vector<std::string>& fields, char sep = ',');

}  // namespace noma::csv
