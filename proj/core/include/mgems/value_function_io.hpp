#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mgems/polyhedral.hpp"

namespace mgems {

/// Text layout, one token group per line:
///   mgems-value-functions v1
///   steps <T+1>
///   step <t> <cut count>
///   <lambda_b> <lambda_h> <lambda_theta_w> <lambda_theta_i> <beta>   (one line per cut)
///   end
/// Numbers use the shortest decimal form that reads back to the same double.
void write_value_functions(const std::vector<PolyhedralFunction>& value, std::ostream& out);
std::vector<PolyhedralFunction> read_value_functions(std::istream& in);

void save_value_functions(const std::vector<PolyhedralFunction>& value, const std::string& path);
std::vector<PolyhedralFunction> load_value_functions(const std::string& path);

}  // namespace mgems
