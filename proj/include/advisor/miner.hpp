#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advisor/matrix.hpp"

namespace advisor {

struct Itemset {
  std::vector<std::string> attributes;  // sorted
  double support = 0.0;                 // fraction of workload rows

  friend bool operator==(const Itemset&, const Itemset&) = default;
};

// Levelwise (Apriori) frequent itemset mining over the matrix. Returns
// exactly the itemsets with support >= minsup, sorted by (size, attributes).
// max_len = 0 means unbounded.
std::vector<Itemset> mine_frequent_itemsets(const QueryAttributeMatrix& m,
                                            double minsup,
                                            std::size_t max_len = 0);

// |i AND j| / |i OR j| on binary rows; 1 when both rows are all-zero.
double jaccard(const std::vector<std::uint8_t>& row_i,
               const std::vector<std::uint8_t>& row_j);

struct QueryCluster {
  std::vector<int> members;             // query ids, sorted
  std::vector<std::string> attributes;  // union of member rows' 1-columns, sorted
};

// Average-link agglomerative clustering of matrix rows under Jaccard
// similarity. Merging stops when no pair of clusters reaches tau; ties are
// broken toward the pair with the lowest (min id of first, min id of
// second). Output clusters are sorted by smallest member id.
std::vector<QueryCluster> cluster_queries(const QueryAttributeMatrix& m, double tau);

// Debug dumps: "attr1 attr2;support" / "cluster_id;id id id" lines.
std::string itemsets_to_csv(const std::vector<Itemset>& itemsets);
std::string clusters_to_csv(const std::vector<QueryCluster>& clusters);

}  // namespace advisor
