#pragma once

#include <string>
#include <vector>

namespace vqsim {

// 17 significant digits, enough to round-trip a double.
std::string format_double(double v);
std::string csv_join(const std::vector<std::string>& fields);

}  // namespace vqsim
