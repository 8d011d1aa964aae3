#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "advisor/catalog.hpp"
#include "advisor/workload.hpp"

namespace advisor {

// Parses one statement of the supported grammar: a single-block SELECT over
// a star join (FROM list or [INNER] JOIN ... ON), WHERE as a conjunction of
// {=, BETWEEN, IN} predicates and join equalities, GROUP BY, and the
// aggregates SUM/COUNT/MIN/MAX/AVG. ORDER BY is accepted and ignored.
// OR, subqueries, HAVING, outer joins and DISTINCT are rejected with
// UnsupportedFeature; unresolvable names with UnknownAttribute; anything
// else malformed with SyntaxError (carrying a byte offset).
ParsedQuery parse_query(std::string_view sql, const Catalog& catalog);

// Splits a workload text (statements terminated by ';', '--' line comments)
// and parses each statement. Errors are rethrown with the 1-based statement
// ordinal prepended to the message. Query ids are assigned in file order.
std::vector<ParsedQuery> parse_workload(std::string_view text, const Catalog& catalog);

std::vector<ParsedQuery> load_workload(const std::filesystem::path& path,
                                       const Catalog& catalog);

}  // namespace advisor
