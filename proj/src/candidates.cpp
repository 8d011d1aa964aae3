#include "advisor/candidates.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "advisor/common.hpp"
#include "advisor/errors.hpp"

namespace advisor {

namespace {

std::string sanitize(std::string_view qualified) {
  std::string out(qualified);
  std::replace(out.begin(), out.end(), '.', '_');
  return out;
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

const char* to_string(IndexKind k) {
  return k == IndexKind::BTree ? "btree" : "bitmap_join";
}

std::string btree_id(const std::string& table, const std::vector<std::string>& columns) {
  std::string id = "bt__" + table;
  for (const std::string& c : columns) {
    auto dot = c.find('.');
    id += "__" + (dot == std::string::npos ? c : sanitize(c));
  }
  return id;
}

std::string bitmap_join_id(const std::string& dimension, const std::string& attribute,
                           const std::string& fact_fk_column) {
  auto column = split_qualified(attribute).second;
  auto fk_col = split_qualified(fact_fk_column).second;
  return "bjix__" + dimension + "__" + column + "__" + fk_col;
}

std::string view_id(const std::vector<std::string>& dimensions,
                    const std::vector<Aggregate>& aggregates,
                    const std::vector<std::string>& tables) {
  std::ostringstream desc;
  desc << "dims=";
  for (const std::string& d : dimensions) desc << d << ",";
  desc << "|aggs=";
  for (const Aggregate& a : aggregates) desc << to_sql(a) << ",";
  desc << "|tables=";
  for (const std::string& t : tables) desc << t << ",";
  return "mv__" + hex16(fnv1a64(desc.str()));
}

std::vector<Aggregate> storable_aggregates(const Aggregate& agg) {
  switch (agg.func) {
    case AggFunc::Avg:
      return {{AggFunc::Sum, agg.argument}, {AggFunc::Count, "*"}};
    case AggFunc::Count:
      return {{AggFunc::Count, "*"}};
    default:
      return {agg};
  }
}

std::vector<CandidateIndex> indexes_from_itemsets(const std::vector<Itemset>& itemsets,
                                                  const Catalog& catalog) {
  std::vector<CandidateIndex> out;
  auto add = [&out](CandidateIndex ix) {
    for (const CandidateIndex& existing : out) {
      if (existing.structurally_equal(ix)) return;
    }
    out.push_back(std::move(ix));
  };

  for (const Itemset& its : itemsets) {
    for (const std::string& attr : its.attributes) {
      std::string table_name = split_qualified(attr).first;
      // (a) bitmap join index for every non-key dimension attribute, one per
      // FK path from the fact table.
      if (catalog.is_dimension_attribute(attr) && !catalog.is_primary_key(attr)) {
        for (const std::string& fk_col : catalog.fact_fk_columns_to(table_name)) {
          CandidateIndex ix;
          ix.kind = IndexKind::BitmapJoin;
          ix.table = catalog.fact().name;
          ix.columns = {attr};
          ix.fact_fk_column = join_qualified(catalog.fact().name, fk_col);
          ix.id = bitmap_join_id(table_name, attr, ix.fact_fk_column);
          add(std::move(ix));
        }
      }
      // (b) single-column btree on the attribute's own table.
      CandidateIndex bt;
      bt.kind = IndexKind::BTree;
      bt.table = table_name;
      bt.columns = {attr};
      bt.id = btree_id(table_name, bt.columns);
      add(std::move(bt));
    }

    // (c) composite btree when the whole itemset lies on one table.
    if (its.attributes.size() >= 2) {
      std::set<std::string> tables;
      for (const std::string& attr : its.attributes) {
        tables.insert(split_qualified(attr).first);
      }
      if (tables.size() == 1) {
        std::vector<std::string> cols = its.attributes;
        std::sort(cols.begin(), cols.end(), [&](const std::string& a, const std::string& b) {
          std::uint64_t ca = catalog.attribute(a).cardinality;
          std::uint64_t cb = catalog.attribute(b).cardinality;
          if (ca != cb) return ca > cb;  // descending cardinality
          return a < b;
        });
        CandidateIndex ix;
        ix.kind = IndexKind::BTree;
        ix.table = *tables.begin();
        ix.columns = std::move(cols);
        ix.id = btree_id(ix.table, ix.columns);
        add(std::move(ix));
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const CandidateIndex& a, const CandidateIndex& b) {
    return a.id < b.id;
  });
  return out;
}

CandidateView view_from_cluster(const QueryCluster& cluster,
                                const std::vector<ParsedQuery>& workload,
                                const Catalog& catalog) {
  if (cluster.members.empty()) {
    throw EmptyClusterError("cannot build a view from an empty cluster");
  }

  CandidateView v;
  v.source_queries = cluster.members;

  std::set<std::string> dims;
  std::set<Aggregate> aggs;
  aggs.insert({AggFunc::Count, "*"});  // always stored, supports rollup and AVG
  std::set<std::string> tables = {catalog.fact().name};

  for (int qid : cluster.members) {
    const ParsedQuery* q = nullptr;
    for (const ParsedQuery& cand : workload) {
      if (cand.id == qid) {
        q = &cand;
        break;
      }
    }
    if (q == nullptr) {
      throw ValidationError("cluster member " + std::to_string(qid) +
                            " is not in the workload");
    }
    for (const std::string& a : q->group_by) dims.insert(a);
    for (const Predicate& p : q->restrictions) dims.insert(p.attribute);
    for (const Aggregate& a : q->aggregates) {
      for (const Aggregate& stored : storable_aggregates(a)) aggs.insert(stored);
    }
  }

  for (const std::string& d : dims) {
    catalog.attribute(d);  // every dimension attribute must resolve
    tables.insert(split_qualified(d).first);
  }
  for (const Aggregate& a : aggs) {
    if (a.argument != "*") {
      catalog.attribute(a.argument);
      // Aggregate arguments do not pull their table into the join: they are
      // fact measures in every query this grammar admits.
    }
  }

  v.dimensions.assign(dims.begin(), dims.end());
  v.aggregates.assign(aggs.begin(), aggs.end());
  v.tables.assign(tables.begin(), tables.end());
  v.id = view_id(v.dimensions, v.aggregates, v.tables);
  return v;
}

std::vector<CandidateIndex> indexes_on_view(const CandidateView& view,
                                            const std::vector<ParsedQuery>& workload) {
  std::set<std::string> restricted;
  for (int qid : view.source_queries) {
    for (const ParsedQuery& q : workload) {
      if (q.id != qid) continue;
      for (const Predicate& p : q.restrictions) restricted.insert(p.attribute);
    }
  }

  std::vector<CandidateIndex> out;
  for (const std::string& dim : view.dimensions) {
    if (!restricted.count(dim)) continue;
    CandidateIndex ix;
    ix.kind = IndexKind::BTree;
    ix.table = view.id;
    ix.columns = {dim};
    ix.id = btree_id(view.id, ix.columns);
    out.push_back(std::move(ix));
  }
  return out;
}

bool can_answer(const CandidateView& view, const ParsedQuery& query) {
  auto contains = [](const std::vector<std::string>& sorted, const std::string& x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
  };
  for (const std::string& t : query.tables) {
    if (!contains(view.tables, t)) return false;
  }
  for (const std::string& g : query.group_by) {
    if (!contains(view.dimensions, g)) return false;
  }
  for (const Predicate& p : query.restrictions) {
    if (!contains(view.dimensions, p.attribute)) return false;
  }
  auto has_agg = [&](AggFunc f, const std::string& arg) {
    return std::find(view.aggregates.begin(), view.aggregates.end(),
                     Aggregate{f, arg}) != view.aggregates.end();
  };
  for (const Aggregate& a : query.aggregates) {
    switch (a.func) {
      case AggFunc::Sum:
      case AggFunc::Min:
      case AggFunc::Max:
        if (!has_agg(a.func, a.argument)) return false;
        break;
      case AggFunc::Count:
        if (!has_agg(AggFunc::Count, "*")) return false;
        break;
      case AggFunc::Avg:
        if (!has_agg(AggFunc::Sum, a.argument) || !has_agg(AggFunc::Count, "*")) {
          return false;
        }
        break;
    }
  }
  return true;
}

}  // namespace advisor
