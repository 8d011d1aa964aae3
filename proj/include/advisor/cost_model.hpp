#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "advisor/candidates.hpp"
#include "advisor/catalog.hpp"
#include "advisor/workload.hpp"

namespace advisor {

// The selected set of physical structures. Secondary indexes on a view may
// only be present together with their view.
class Configuration {
 public:
  Configuration() = default;

  void add(CandidateView view);
  void add(CandidateIndex index);

  bool contains(std::string_view id) const;
  const CandidateView* find_view(std::string_view id) const;

  const std::vector<CandidateView>& views() const noexcept { return views_; }
  const std::vector<CandidateIndex>& indexes() const noexcept { return indexes_; }
  std::uint64_t total_size_bytes() const noexcept { return total_size_bytes_; }
  std::size_t size() const noexcept { return views_.size() + indexes_.size(); }

  // Throws ValidationError if a view-secondary index is present without its
  // view or any structure id is duplicated.
  void validate(const Catalog& catalog) const;

 private:
  std::vector<CandidateView> views_;     // sorted by id
  std::vector<CandidateIndex> indexes_;  // sorted by id
  std::uint64_t total_size_bytes_ = 0;
};

// Storage cost. Bitmap join: ceil(|fact| * cardinality / 8). Btree over key
// width k on a table of |T| rows: |T| * (k + 8). A btree whose table is a
// candidate view uses that view's estimated row count; pass the candidate
// views so it can be looked up.
std::uint64_t index_size(const CandidateIndex& ix, const Catalog& catalog,
                         const std::vector<CandidateView>& views = {});

// Estimated rows: min(product of dimension-attribute cardinalities, |fact|);
// the empty product is 1.
std::uint64_t view_rows_estimate(const CandidateView& v, const Catalog& catalog);

// rows * (sum of dimension widths + 8 bytes per stored aggregate).
std::uint64_t view_size(const CandidateView& v, const Catalog& catalog);

// Textbook selectivity constants: equality 1/cardinality, IN-list
// k/cardinality (capped at 1), range 1/3.
double selectivity(const Predicate& p, const Catalog& catalog);

// Tie-break order for equal-cost plans, best first.
enum class PlanKind { ViewIndex, View, Bitmap, BTree, Scan };

const char* to_string(PlanKind k);

struct QueryPlan {
  int query_id = -1;
  PlanKind plan = PlanKind::Scan;
  std::uint64_t cost_pages = 0;
  std::vector<std::string> uses;  // structure ids the plan reads
};

struct CostBreakdown {
  std::vector<QueryPlan> per_query;
  std::uint64_t total_pages = 0;
};

// Minimum page count over the applicable access plans:
//   scan        pages(fact) + sum of pages over joined dimensions
//   bitmap      every restriction attribute has its bitmap join index in the
//               configuration (on the query's join path) and all group-by
//               attributes sit on dimension tables; cost = bitmap pages +
//               ceil(combined selectivity * fact pages) + group-by dim pages
//   view        some view answers the query; cost = view pages
//   view+index  a secondary btree covers a restricted view dimension;
//               cost = ceil(selectivity of that attribute * view pages) + 1
// Base-table btrees are costed for storage but never reduce query cost.
QueryPlan query_cost(const ParsedQuery& q, const Configuration& config,
                     const Catalog& catalog);

CostBreakdown workload_cost(const std::vector<ParsedQuery>& workload,
                            const Configuration& config, const Catalog& catalog);

std::string breakdown_to_text(const CostBreakdown& b);
std::string breakdown_to_csv(const CostBreakdown& b);

}  // namespace advisor
