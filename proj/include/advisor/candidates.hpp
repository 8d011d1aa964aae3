#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advisor/catalog.hpp"
#include "advisor/miner.hpp"
#include "advisor/workload.hpp"

namespace advisor {

enum class IndexKind { BTree, BitmapJoin };

const char* to_string(IndexKind k);

// A proposed physical index. For btrees, `table` is the owning base table
// or the id of a candidate view, and `columns` is the key in order. For
// bitmap join indexes, `table` is the fact table, `columns` holds the single
// dimension attribute, and `fact_fk_column` names the fact column whose FK
// edge reaches that dimension.
struct CandidateIndex {
  std::string id;
  IndexKind kind = IndexKind::BTree;
  std::string table;
  std::vector<std::string> columns;  // qualified "table.column" names
  std::string fact_fk_column;        // bitmap join only, e.g. "sales.date_id"
  std::uint64_t size_bytes = 0;      // filled by the cost model

  bool structurally_equal(const CandidateIndex& other) const {
    return kind == other.kind && table == other.table &&
           columns == other.columns && fact_fk_column == other.fact_fk_column;
  }
};

// A fact-grain star aggregate: GROUP BY the dimension attributes over the
// star join of `tables`, storing the aggregate columns. AVG is never stored;
// it is kept as SUM + COUNT.
struct CandidateView {
  std::string id;
  std::vector<int> source_queries;        // cluster members
  std::vector<std::string> dimensions;    // sorted qualified attributes
  std::vector<Aggregate> aggregates;      // sorted, COUNT(*) always present
  std::vector<std::string> tables;        // sorted: fact + referenced dims
  std::uint64_t size_bytes = 0;           // filled by the cost model
  std::vector<CandidateIndex> secondary_indexes;

  bool structurally_equal(const CandidateView& other) const {
    return dimensions == other.dimensions && aggregates == other.aggregates &&
           tables == other.tables;
  }
};

// Index candidates for a set of frequent itemsets:
//  (a) each non-key dimension attribute -> one bitmap join index per FK path,
//  (b) each attribute -> one single-column btree on its own table,
//  (c) each multi-attribute itemset confined to one table -> one composite
//      btree with columns ordered by descending cardinality.
// Duplicates across itemsets are coalesced; output is sorted by id.
std::vector<CandidateIndex> indexes_from_itemsets(const std::vector<Itemset>& itemsets,
                                                  const Catalog& catalog);

// Merged view for one cluster: dimensions are the union of member group-by
// and restriction attributes (predicates are lifted into dimensions),
// aggregates the union of member aggregates with AVG expanded and COUNT(*)
// always included.
CandidateView view_from_cluster(const QueryCluster& cluster,
                                const std::vector<ParsedQuery>& workload,
                                const Catalog& catalog);

// One single-column btree on the view for each view dimension that some
// member query restricts.
std::vector<CandidateIndex> indexes_on_view(const CandidateView& view,
                                            const std::vector<ParsedQuery>& workload);

// Subsumption: can `query` be answered from the view's stored rows by
// selection and re-aggregation alone?
bool can_answer(const CandidateView& view, const ParsedQuery& query);

// Stable content-derived ids.
std::string btree_id(const std::string& table, const std::vector<std::string>& columns);
std::string bitmap_join_id(const std::string& dimension, const std::string& attribute,
                           const std::string& fact_fk_column);
std::string view_id(const std::vector<std::string>& dimensions,
                    const std::vector<Aggregate>& aggregates,
                    const std::vector<std::string>& tables);

// Normalizes a member aggregate for view storage: AVG(x) -> {SUM(x),
// COUNT(*)}, COUNT(x) -> COUNT(*).
std::vector<Aggregate> storable_aggregates(const Aggregate& agg);

}  // namespace advisor
