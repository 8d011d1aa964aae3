#include "advisor/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "advisor/common.hpp"
#include "advisor/errors.hpp"

namespace advisor {

namespace {

// Exact product of small rational selectivities, so page counts reproduce
// hand arithmetic (e.g. ceil(489 * 1/3) = 163). Falls back to double if the
// reduced fraction outgrows 64 bits.
class SelectivityProduct {
 public:
  void multiply(std::uint64_t num, std::uint64_t den) {
    approx_ *= static_cast<double>(num) / static_cast<double>(den);
    if (!exact_) return;
    std::uint64_t g1 = std::gcd(num, den_);
    num /= g1;
    den_ /= g1;
    std::uint64_t g2 = std::gcd(num_, den);
    num_ /= g2;
    den /= g2;
    unsigned __int128 n = static_cast<unsigned __int128>(num_) * num;
    unsigned __int128 d = static_cast<unsigned __int128>(den_) * den;
    if (n > UINT64_MAX || d > UINT64_MAX) {
      exact_ = false;
      return;
    }
    num_ = static_cast<std::uint64_t>(n);
    den_ = static_cast<std::uint64_t>(d);
  }

  void multiply(double value) {
    approx_ *= value;
    exact_ = false;
  }

  std::uint64_t ceil_times(std::uint64_t pages) const {
    if (exact_) {
      unsigned __int128 n = static_cast<unsigned __int128>(num_) * pages;
      return static_cast<std::uint64_t>((n + den_ - 1) / den_);
    }
    return static_cast<std::uint64_t>(std::ceil(approx_ * static_cast<double>(pages)));
  }

  double value() const { return approx_; }

 private:
  std::uint64_t num_ = 1;
  std::uint64_t den_ = 1;
  bool exact_ = true;
  double approx_ = 1.0;
};

void selectivity_into(const Predicate& p, const Catalog& catalog,
                      SelectivityProduct& product) {
  std::uint64_t card = catalog.attribute(p.attribute).cardinality;
  switch (p.op) {
    case PredOp::Eq:
      product.multiply(1, card);
      break;
    case PredOp::In:
      product.multiply(std::min<std::uint64_t>(p.values.size(), card), card);
      break;
    case PredOp::Range:
      product.multiply(1, 3);
      break;
  }
}

std::uint64_t structure_pages(std::uint64_t size_bytes, const Catalog& catalog) {
  std::uint64_t pages = ceil_div(size_bytes, catalog.page_size_bytes());
  return pages == 0 ? 1 : pages;
}

void require_sized(std::uint64_t size_bytes, const std::string& id) {
  if (size_bytes == 0) {
    throw UnsizedStructureError("structure \"" + id + "\" has no computed size");
  }
}

}  // namespace

void Configuration::add(CandidateView view) {
  auto pos = std::lower_bound(views_.begin(), views_.end(), view.id,
                              [](const CandidateView& v, const std::string& id) {
                                return v.id < id;
                              });
  total_size_bytes_ += view.size_bytes;
  views_.insert(pos, std::move(view));
}

void Configuration::add(CandidateIndex index) {
  auto pos = std::lower_bound(indexes_.begin(), indexes_.end(), index.id,
                              [](const CandidateIndex& i, const std::string& id) {
                                return i.id < id;
                              });
  total_size_bytes_ += index.size_bytes;
  indexes_.insert(pos, std::move(index));
}

bool Configuration::contains(std::string_view id) const {
  if (find_view(id) != nullptr) return true;
  for (const CandidateIndex& i : indexes_) {
    if (i.id == id) return true;
  }
  return false;
}

const CandidateView* Configuration::find_view(std::string_view id) const {
  for (const CandidateView& v : views_) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

void Configuration::validate(const Catalog& catalog) const {
  std::set<std::string> ids;
  for (const CandidateView& v : views_) {
    if (!ids.insert(v.id).second) {
      throw ValidationError("duplicate structure id \"" + v.id + "\"");
    }
  }
  for (const CandidateIndex& i : indexes_) {
    if (!ids.insert(i.id).second) {
      throw ValidationError("duplicate structure id \"" + i.id + "\"");
    }
    if (catalog.find_table(i.table) == nullptr && find_view(i.table) == nullptr) {
      throw ValidationError("secondary index \"" + i.id + "\" without its view \"" +
                            i.table + "\"");
    }
  }
}

std::uint64_t view_rows_estimate(const CandidateView& v, const Catalog& catalog) {
  std::uint64_t fact_rows = catalog.fact().row_count;
  std::uint64_t rows = 1;
  for (const std::string& dim : v.dimensions) {
    std::uint64_t card = catalog.attribute(dim).cardinality;
    if (card == 0 || rows > fact_rows / card) {
      return fact_rows;  // saturating: the product already exceeds |fact|
    }
    rows *= card;
  }
  return std::min(rows, fact_rows);
}

std::uint64_t view_size(const CandidateView& v, const Catalog& catalog) {
  std::uint64_t width = 0;
  for (const std::string& dim : v.dimensions) {
    width += catalog.attribute(dim).width_bytes;
  }
  width += 8 * static_cast<std::uint64_t>(v.aggregates.size());
  return view_rows_estimate(v, catalog) * width;
}

std::uint64_t index_size(const CandidateIndex& ix, const Catalog& catalog,
                         const std::vector<CandidateView>& views) {
  if (ix.kind == IndexKind::BitmapJoin) {
    std::uint64_t card = catalog.attribute(ix.columns.at(0)).cardinality;
    return ceil_div(catalog.fact().row_count * card, 8);
  }
  std::uint64_t key_width = 0;
  for (const std::string& col : ix.columns) {
    key_width += catalog.attribute(col).width_bytes;
  }
  std::uint64_t rows = 0;
  if (const TableMeta* t = catalog.find_table(ix.table)) {
    rows = t->row_count;
  } else {
    auto owner = std::find_if(views.begin(), views.end(), [&](const CandidateView& v) {
      return v.id == ix.table;
    });
    if (owner == views.end()) {
      throw UnknownTableError("index table \"" + ix.table +
                              "\" is neither a base table nor a known view");
    }
    rows = view_rows_estimate(*owner, catalog);
  }
  return rows * (key_width + 8);
}

double selectivity(const Predicate& p, const Catalog& catalog) {
  SelectivityProduct product;
  selectivity_into(p, catalog, product);
  return product.value();
}

const char* to_string(PlanKind k) {
  switch (k) {
    case PlanKind::ViewIndex: return "view+index";
    case PlanKind::View: return "view";
    case PlanKind::Bitmap: return "bitmap";
    case PlanKind::BTree: return "btree";
    case PlanKind::Scan: return "scan";
  }
  return "?";
}

QueryPlan query_cost(const ParsedQuery& q, const Configuration& config,
                     const Catalog& catalog) {
  for (const CandidateView& v : config.views()) require_sized(v.size_bytes, v.id);
  for (const CandidateIndex& i : config.indexes()) require_sized(i.size_bytes, i.id);

  QueryPlan best;
  best.query_id = q.id;
  best.plan = PlanKind::Scan;
  best.cost_pages = 0;
  for (const std::string& t : q.tables) {
    best.cost_pages += catalog.table_pages(t);
  }

  auto consider = [&best](PlanKind plan, std::uint64_t pages,
                          std::vector<std::string> uses) {
    if (pages < best.cost_pages ||
        (pages == best.cost_pages && static_cast<int>(plan) < static_cast<int>(best.plan))) {
      best.plan = plan;
      best.cost_pages = pages;
      best.uses = std::move(uses);
    }
  };

  // Bitmap join plan: intersect per-attribute bitmaps, fetch the selected
  // fraction of fact pages, then read the group-by dimensions.
  if (!q.restrictions.empty()) {
    bool applicable = true;
    std::set<std::string> restricted;
    for (const Predicate& p : q.restrictions) restricted.insert(p.attribute);
    std::vector<std::string> uses;
    std::uint64_t bitmap_pages = 0;
    for (const std::string& attr : restricted) {
      const CandidateIndex* found = nullptr;
      for (const CandidateIndex& ix : config.indexes()) {
        if (ix.kind != IndexKind::BitmapJoin || ix.columns.at(0) != attr) continue;
        // The bitmap must be built over the join path the query uses.
        std::string dim = split_qualified(attr).first;
        JoinEdge edge{ix.fact_fk_column,
                      join_qualified(dim, catalog.table(dim).primary_key)};
        if (edge.right < edge.left) std::swap(edge.left, edge.right);
        if (std::binary_search(q.join_edges.begin(), q.join_edges.end(), edge)) {
          found = &ix;
          break;
        }
      }
      if (found == nullptr) {
        applicable = false;
        break;
      }
      uses.push_back(found->id);
      bitmap_pages += structure_pages(found->size_bytes, catalog);
    }
    for (const std::string& g : q.group_by) {
      if (applicable && !catalog.is_dimension_attribute(g)) applicable = false;
    }
    if (applicable) {
      SelectivityProduct sel;
      for (const Predicate& p : q.restrictions) selectivity_into(p, catalog, sel);
      std::uint64_t pages = bitmap_pages;
      pages += sel.ceil_times(catalog.table_pages(catalog.fact().name));
      std::set<std::string> group_dims;
      for (const std::string& g : q.group_by) {
        group_dims.insert(split_qualified(g).first);
      }
      for (const std::string& dim : group_dims) {
        pages += catalog.table_pages(dim);
      }
      consider(PlanKind::Bitmap, pages, std::move(uses));
    }
  }

  // View and view+index plans.
  for (const CandidateView& v : config.views()) {
    if (!can_answer(v, q)) continue;
    std::uint64_t v_pages = structure_pages(v.size_bytes, catalog);
    consider(PlanKind::View, v_pages, {v.id});

    for (const CandidateIndex& ix : config.indexes()) {
      if (ix.kind != IndexKind::BTree || ix.table != v.id) continue;
      const std::string& key = ix.columns.at(0);
      SelectivityProduct sel;
      bool covers = false;
      for (const Predicate& p : q.restrictions) {
        if (p.attribute == key) {
          selectivity_into(p, catalog, sel);
          covers = true;
        }
      }
      if (!covers) continue;
      consider(PlanKind::ViewIndex, sel.ceil_times(v_pages) + 1, {v.id, ix.id});
    }
  }

  return best;
}

CostBreakdown workload_cost(const std::vector<ParsedQuery>& workload,
                            const Configuration& config, const Catalog& catalog) {
  CostBreakdown out;
  for (const ParsedQuery& q : workload) {
    out.per_query.push_back(query_cost(q, config, catalog));
    out.total_pages += out.per_query.back().cost_pages;
  }
  return out;
}

std::string breakdown_to_text(const CostBreakdown& b) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "query" << std::setw(12) << "plan"
      << std::setw(12) << "pages" << "uses\n";
  for (const QueryPlan& p : b.per_query) {
    out << std::left << std::setw(8) << p.query_id << std::setw(12)
        << to_string(p.plan) << std::setw(12) << p.cost_pages;
    for (std::size_t i = 0; i < p.uses.size(); ++i) {
      if (i) out << " ";
      out << p.uses[i];
    }
    out << "\n";
  }
  out << "total: " << b.total_pages << " pages\n";
  return out.str();
}

std::string breakdown_to_csv(const CostBreakdown& b) {
  std::ostringstream out;
  out << "query,plan,cost_pages,uses\n";
  for (const QueryPlan& p : b.per_query) {
    out << p.query_id << "," << to_string(p.plan) << "," << p.cost_pages << ",";
    for (std::size_t i = 0; i < p.uses.size(); ++i) {
      if (i) out << " ";
      out << p.uses[i];
    }
    out << "\n";
  }
  out << "total,," << b.total_pages << ",\n";
  return out.str();
}

}  // namespace advisor
