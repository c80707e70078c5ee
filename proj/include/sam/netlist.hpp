#ifndef SAM_NETLIST_HPP
#define SAM_NETLIST_HPP

#include <string>
#include <string_view>

#include "sam/problem.hpp"

namespace sam {

/// Parse a `.sam` design description into a validated DesignProblem.
///
/// The grammar is line oriented, one statement per line, `#` comments,
/// whitespace-insensitive within a line:
///
///   device <cantilever|pressure_sensor> [calib_f=<real>]
///   param <name> nominal=<real> dist=<none | gaussian sigma=<real>
///         | uniform (lo=<real> hi=<real> | halfwidth=<real>)
///         | exponential rate=<real> [offset=<real>]>
///   bind <device-field> = <param-name | literal-real>
///   metric <name>
///   spec <metric> <ge|le> <real>
///
/// Any failure throws ParseError with a 1-based line number; no input text
/// crashes the parser.
DesignProblem parse(std::string_view text);

/// Canonical text form; parse(serialize(p)) reproduces p structurally.
/// Throws UnsupportedOperation for synthetic devices.
std::string serialize(const DesignProblem& problem);

/// Shortest decimal form that round-trips through parse exactly.
std::string format_real(double v);

}  // namespace sam

#endif  // SAM_NETLIST_HPP
