#pragma once

#include <string>

#include "hamsec/jet.hpp"

namespace hamsec {

class parse_error : public error {
public:
    parse_error(const std::string& msg, int line, int col)
        : error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line(line), col(col) {}
    int line, col;
};

// Exact polynomial over the chart variables.  Grammar: sums and differences
// of terms, `*` products, `^` nonnegative integer powers, parentheses,
// integer and `a/b` rational literals.  Whitespace-insensitive.  The result
// is tagged with `order`; terms above it are an error (the input would not be
// represented exactly).
Jet parse_polynomial(const std::string& text, Chart chart, int order);

}  // namespace hamsec
