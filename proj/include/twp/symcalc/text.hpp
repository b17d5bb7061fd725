#pragma once

#include <string>
#include <string_view>

#include "twp/symcalc/chart_map.hpp"
#include "twp/symcalc/tensor.hpp"

namespace twp::sym {

// Syntax or kind error in expression text; column is 1-based within the text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t column) : Error(what), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

// Canonical text. Parsing the output reproduces the same value.
std::string to_string(const Rational& q);
std::string to_string(const Scalar& f, const Chart& chart);
std::string to_string(const Form& w);
std::string to_string(const Multivector& m);
std::string angle_image_to_string(const AngleImage& img, const Chart& source);

// Expression grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] INT)?
//   primary := NUMBER | NAME | 'pi' | '(' expr ')' | ('sin' | 'cos') '(' expr ')'
// Angle coordinates may only appear as sin/cos(k*pi*angle) with k an even integer.
Scalar parse_scalar(std::string_view text, const Chart& chart);

// Sum of terms `coeff * dX^dY^...` (forms) or `coeff * d/dX^d/dY` (multivectors).
Form parse_form(std::string_view text, const Chart& chart, int degree);
Multivector parse_multivector(std::string_view text, const Chart& chart, int degree);

// Integer combination of source angles plus a shift in source real coordinates.
AngleImage parse_angle_image(std::string_view text, const Chart& source);

}  // namespace twp::sym
