#include "advisor/matrix.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "advisor/errors.hpp"

namespace advisor {

ExtractionRuleSet ExtractionRuleSet::all_enabled() {
  return ExtractionRuleSet({{Clause::WhereRestriction, RuleAction::Extract},
                            {Clause::WhereJoin, RuleAction::Extract},
                            {Clause::GroupBy, RuleAction::Extract}});
}

ExtractionRuleSet::ExtractionRuleSet(std::vector<ExtractionRule> rules)
    : rules_(std::move(rules)) {
  bool any_extract = std::any_of(rules_.begin(), rules_.end(), [](const ExtractionRule& r) {
    return r.action == RuleAction::Extract;
  });
  if (!any_extract) {
    throw ValidationError("extraction rule set has no extract rule");
  }
}

bool ExtractionRuleSet::extracts(Clause clause) const {
  bool extract = false;
  for (const ExtractionRule& r : rules_) {
    if (r.clause == clause) extract = (r.action == RuleAction::Extract);
  }
  return extract;
}

std::set<std::string> extract_attributes(const ParsedQuery& query,
                                         const ExtractionRuleSet& rules) {
  std::set<std::string> out;
  if (rules.extracts(Clause::WhereRestriction)) {
    for (const Predicate& p : query.restrictions) out.insert(p.attribute);
  }
  if (rules.extracts(Clause::WhereJoin)) {
    for (const JoinEdge& e : query.join_edges) {
      out.insert(e.left);
      out.insert(e.right);
    }
  }
  if (rules.extracts(Clause::GroupBy)) {
    for (const std::string& a : query.group_by) out.insert(a);
  }
  return out;
}

QueryAttributeMatrix build_matrix(const std::vector<ParsedQuery>& workload,
                                  const ExtractionRuleSet& rules) {
  if (workload.empty()) {
    throw EmptyWorkloadError("cannot build a query-attribute matrix from an empty workload");
  }
  std::vector<std::set<std::string>> extracted;
  extracted.reserve(workload.size());
  std::set<std::string> all;
  for (const ParsedQuery& q : workload) {
    extracted.push_back(extract_attributes(q, rules));
    all.insert(extracted.back().begin(), extracted.back().end());
  }

  QueryAttributeMatrix m;
  m.attributes.assign(all.begin(), all.end());  // std::set is already sorted
  std::map<std::string, std::size_t> col_of;
  for (std::size_t c = 0; c < m.attributes.size(); ++c) col_of[m.attributes[c]] = c;

  for (std::size_t r = 0; r < workload.size(); ++r) {
    m.query_ids.push_back(workload[r].id >= 0 ? workload[r].id : static_cast<int>(r));
    std::vector<std::uint8_t> row(m.attributes.size(), 0);
    for (const std::string& a : extracted[r]) row[col_of[a]] = 1;
    m.cells.push_back(std::move(row));
  }
  return m;
}

std::string matrix_to_csv(const QueryAttributeMatrix& m) {
  std::ostringstream out;
  out << "query";
  for (const std::string& a : m.attributes) out << "," << a;
  out << "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << m.query_ids[r];
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out << "," << static_cast<int>(m.cells[r][c]);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace advisor
