#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "advisor/workload.hpp"

namespace advisor {

// If-then extraction rules: which clause classes contribute attributes to
// the query-attribute matrix. Rules are applied in order; the last rule for
// a clause wins.
enum class Clause { WhereRestriction, WhereJoin, GroupBy };

enum class RuleAction { Extract, Ignore };

struct ExtractionRule {
  Clause clause;
  RuleAction action;
};

class ExtractionRuleSet {
 public:
  // All three clause classes extracted; the default for the whole pipeline.
  static ExtractionRuleSet all_enabled();

  explicit ExtractionRuleSet(std::vector<ExtractionRule> rules);

  bool extracts(Clause clause) const;
  const std::vector<ExtractionRule>& rules() const noexcept { return rules_; }

 private:
  std::vector<ExtractionRule> rules_;
};

// Applies the enabled rules to one query: restriction attributes, both
// sides of each join edge, group-by attributes. Aggregate arguments are
// never extracted.
std::set<std::string> extract_attributes(const ParsedQuery& query,
                                         const ExtractionRuleSet& rules);

// Binary matrix: one row per workload query (in workload order), one column
// per attribute extracted from at least one query (sorted lexicographically).
struct QueryAttributeMatrix {
  std::vector<int> query_ids;
  std::vector<std::string> attributes;
  std::vector<std::vector<std::uint8_t>> cells;  // cells[row][col] in {0,1}

  std::size_t rows() const noexcept { return query_ids.size(); }
  std::size_t cols() const noexcept { return attributes.size(); }
};

QueryAttributeMatrix build_matrix(const std::vector<ParsedQuery>& workload,
                                  const ExtractionRuleSet& rules);

// CSV export: header "query,<attr>,...", one row per query.
std::string matrix_to_csv(const QueryAttributeMatrix& m);

}  // namespace advisor
