#pragma once

#include "kitaoka/field.hpp"

#include <string>
#include <string_view>

namespace kitaoka {

// Element strings are polynomials in the generating root t with rational
// coefficients, e.g. "t^3+t^2-3*t-2" or "1/2*t+1/2". Powers t^k with k >= d are
// reduced modulo the defining polynomial.

/// Parses into rational integral-basis coordinates. Throws SyntaxError.
ElemQ parse_elem_q(const Field& f, std::string_view s);
/// Parses an algebraic integer. Throws SyntaxError or NotIntegral.
Elem parse_elem(const Field& f, std::string_view s);

/// Power-basis rendering, descending degree; parse(format(a)) == a.
std::string format_elem(const Elem& a);
std::string format_elem(const ElemQ& a);

} // namespace kitaoka
