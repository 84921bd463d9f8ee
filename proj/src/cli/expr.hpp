#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace knotflow::cli {

/// Evaluates a real-valued expression over numbers, `pi`, + - * /,
/// parentheses and unary minus, e.g. "pi/2" or "-3*pi/4 + 0.1".
/// Throws std::invalid_argument on malformed input.
double eval_expr(std::string_view text);

/// Comma-separated list of expressions.
std::vector<double> eval_list(std::string_view text);

}  // namespace knotflow::cli
