#pragma once

// `.h3t` text format:
//
//   h3t 1
//   points <n>
//   triple <i> <j> <k> <+|->      (i < j < k; + means R(i,j,k))
//   var <name>                    (constraint files only)
//   lit <t> <t> <t> <+|->         (t is a point id or a declared variable)
//
// `#` starts a comment. Total structures list every sorted triple.

#include "h4free/core.hpp"
#include "h4free/solver.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace h4free {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct H3tDocument {
    PartialHypertournament structure;
    ConstraintSet constraints;

    bool has_constraints() const { return !constraints.variables().empty() || !constraints.literals().empty(); }
};

H3tDocument parse_h3t(std::istream& in);
H3tDocument parse_h3t_string(const std::string& text);
H3tDocument read_h3t_file(const std::string& path);

/// Parses and requires a total structure without constraint lines.
Hypertournament read_total_h3t_file(const std::string& path);

std::string format_h3t(const Hypertournament& h, const std::string& comment = {});
std::string format_h3t(const PartialHypertournament& h, const std::string& comment = {});
void write_h3t_file(const std::string& path, const Hypertournament& h, const std::string& comment = {});

} // namespace h4free
