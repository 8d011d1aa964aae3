#pragma once

#include <string>
#include <vector>

namespace advisor {

enum class AggFunc { Sum, Count, Min, Max, Avg };

const char* to_string(AggFunc f);

struct Aggregate {
  AggFunc func = AggFunc::Count;
  std::string argument;  // qualified "table.column", or "*" (COUNT only)

  friend bool operator==(const Aggregate&, const Aggregate&) = default;
  friend auto operator<=>(const Aggregate&, const Aggregate&) = default;
};

// Render as SQL text, e.g. "SUM(sales.amount)".
std::string to_sql(const Aggregate& agg);

enum class PredOp { Eq, Range, In };

struct Predicate {
  std::string attribute;  // qualified "table.column"
  PredOp op = PredOp::Eq;
  // Eq: one value; Range: low, high; In: one per list element. Values keep
  // their literal text; string literals are stored unquoted.
  std::vector<std::string> values;
  std::vector<bool> quoted;  // parallel to values: true for string literals

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

// One equality between a fact FK column and a dimension PK, stored with
// left < right lexicographically.
struct JoinEdge {
  std::string left;
  std::string right;

  friend bool operator==(const JoinEdge&, const JoinEdge&) = default;
  friend auto operator<=>(const JoinEdge&, const JoinEdge&) = default;
};

// Structural form of one analyzed SQL statement. All attribute names are
// fully qualified and resolved against the catalog; the join graph is a
// star around the fact table.
struct ParsedQuery {
  int id = -1;                           // ordinal in the workload
  std::vector<std::string> tables;       // sorted, unique
  std::vector<JoinEdge> join_edges;      // sorted, unique
  std::vector<Predicate> restrictions;   // in statement order
  std::vector<std::string> group_by;     // in statement order
  std::vector<Aggregate> aggregates;     // in statement order
};

}  // namespace advisor
