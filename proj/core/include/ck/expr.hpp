#pragma once

#include <stdexcept>
#include <string>

#include "ck/staralg.hpp"

// Text syntax for *-algebra elements: p(v), s(e), s*(e), juxtaposition for
// products, +, complex scalar literals a+bi, parentheses.

namespace ck {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t column)
        : std::runtime_error(what + " (column " + std::to_string(column + 1) + ")"),
          column(column) {}
    std::size_t column;
};

/// Parses an expression over the graph's generators. Scalars multiply the
/// unit sum of all vertex projections.
AlgElement parse_expression(const Graph& g, const std::string& text);

std::string to_text(const Graph& g, const Monomial& m);
std::string to_text(const AlgElement& a);

}  // namespace ck
