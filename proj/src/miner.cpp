#include "advisor/miner.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "advisor/errors.hpp"

namespace advisor {

namespace {

// Support counting works on column-index itemsets; rows are bitmasks packed
// into 64-bit words.
using Bits = std::vector<std::uint64_t>;

Bits pack_row(const std::vector<std::uint8_t>& row) {
  Bits bits((row.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i]) bits[i / 64] |= (1ull << (i % 64));
  }
  return bits;
}

Bits itemset_mask(const std::vector<std::size_t>& items, std::size_t cols) {
  Bits bits((cols + 63) / 64, 0);
  for (std::size_t i : items) bits[i / 64] |= (1ull << (i % 64));
  return bits;
}

bool contains_all(const Bits& row, const Bits& mask) {
  for (std::size_t w = 0; w < mask.size(); ++w) {
    if ((row[w] & mask[w]) != mask[w]) return false;
  }
  return true;
}

std::size_t count_support(const std::vector<Bits>& rows, const Bits& mask) {
  std::size_t n = 0;
  for (const Bits& r : rows) {
    if (contains_all(r, mask)) ++n;
  }
  return n;
}

}  // namespace

std::vector<Itemset> mine_frequent_itemsets(const QueryAttributeMatrix& m,
                                            double minsup,
                                            std::size_t max_len) {
  if (!(minsup > 0.0) || minsup > 1.0) {
    throw InvalidMinsupError("minsup must be in (0, 1], got " + std::to_string(minsup));
  }

  const std::size_t n_rows = m.rows();
  const std::size_t n_cols = m.cols();
  std::vector<Bits> rows;
  rows.reserve(n_rows);
  for (const auto& r : m.cells) rows.push_back(pack_row(r));

  auto frequent = [&](std::size_t count) {
    return n_rows > 0 &&
           static_cast<double>(count) / static_cast<double>(n_rows) >= minsup;
  };

  std::vector<Itemset> out;
  // Level 1.
  std::vector<std::vector<std::size_t>> level;
  for (std::size_t c = 0; c < n_cols; ++c) {
    std::size_t count = count_support(rows, itemset_mask({c}, n_cols));
    if (frequent(count)) {
      level.push_back({c});
      out.push_back({{m.attributes[c]},
                     static_cast<double>(count) / static_cast<double>(n_rows)});
    }
  }

  std::size_t k = 1;
  while (!level.empty() && (max_len == 0 || k < max_len)) {
    // Join step: candidates of size k+1 from pairs sharing a (k-1)-prefix.
    std::vector<std::vector<std::size_t>> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t j = i + 1; j < level.size(); ++j) {
        if (!std::equal(level[i].begin(), level[i].end() - 1, level[j].begin())) {
          break;  // level is sorted; once prefixes diverge, later j's diverge too
        }
        std::vector<std::size_t> cand = level[i];
        cand.push_back(level[j].back());
        // Prune step: all k-subsets must be frequent (downward closure).
        bool all_frequent = true;
        for (std::size_t skip = 0; skip + 2 < cand.size() && all_frequent; ++skip) {
          std::vector<std::size_t> sub;
          for (std::size_t s = 0; s < cand.size(); ++s) {
            if (s != skip) sub.push_back(cand[s]);
          }
          all_frequent = std::binary_search(level.begin(), level.end(), sub);
        }
        if (all_frequent) next.push_back(std::move(cand));
      }
    }
    level.clear();
    for (auto& cand : next) {
      std::size_t count = count_support(rows, itemset_mask(cand, n_cols));
      if (frequent(count)) {
        Itemset its;
        for (std::size_t c : cand) its.attributes.push_back(m.attributes[c]);
        its.support = static_cast<double>(count) / static_cast<double>(n_rows);
        out.push_back(std::move(its));
        level.push_back(std::move(cand));
      }
    }
    ++k;
  }

  std::sort(out.begin(), out.end(), [](const Itemset& a, const Itemset& b) {
    if (a.attributes.size() != b.attributes.size()) {
      return a.attributes.size() < b.attributes.size();
    }
    return a.attributes < b.attributes;
  });
  return out;
}

double jaccard(const std::vector<std::uint8_t>& row_i,
               const std::vector<std::uint8_t>& row_j) {
  if (row_i.size() != row_j.size()) {
    throw LengthMismatchError("rows of length " + std::to_string(row_i.size()) +
                              " and " + std::to_string(row_j.size()));
  }
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t k = 0; k < row_i.size(); ++k) {
    bool a = row_i[k] != 0;
    bool b = row_j[k] != 0;
    inter += (a && b) ? 1 : 0;
    uni += (a || b) ? 1 : 0;
  }
  if (uni == 0) return 1.0;  // two all-zero rows are identical
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<QueryCluster> cluster_queries(const QueryAttributeMatrix& m, double tau) {
  if (!(tau > 0.0) || tau > 1.0) {
    throw InvalidThresholdError("tau must be in (0, 1], got " + std::to_string(tau));
  }

  const std::size_t n = m.rows();
  struct Node {
    std::vector<std::size_t> rows;  // row indices, sorted
    int min_id;
    bool alive = true;
  };
  std::vector<Node> nodes;
  for (std::size_t r = 0; r < n; ++r) {
    nodes.push_back({{r}, m.query_ids[r], true});
  }

  // Pairwise average similarities, kept up to date with the Lance-Williams
  // update for average link: sim(A+B, C) = (|A| sim(A,C) + |B| sim(B,C)) / (|A|+|B|).
  std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      sim[i][j] = sim[j][i] = jaccard(m.cells[i], m.cells[j]);
    }
  }

  while (true) {
    double best = -1.0;
    std::size_t best_a = 0, best_b = 0;
    int best_a_min = 0, best_b_min = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!nodes[i].alive) continue;
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        if (!nodes[j].alive) continue;
        std::size_t a = i, b = j;
        int a_min = nodes[a].min_id, b_min = nodes[b].min_id;
        if (b_min < a_min) {
          std::swap(a, b);
          std::swap(a_min, b_min);
        }
        double s = sim[i][j];
        bool better = s > best ||
                      (s == best && (a_min < best_a_min ||
                                     (a_min == best_a_min && b_min < best_b_min)));
        if (better) {
          best = s;
          best_a = a;
          best_b = b;
          best_a_min = a_min;
          best_b_min = b_min;
        }
      }
    }
    if (best < tau) break;

    Node& keep = nodes[best_a];
    Node& gone = nodes[best_b];
    double wa = static_cast<double>(keep.rows.size());
    double wb = static_cast<double>(gone.rows.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      if (!nodes[k].alive || k == best_a || k == best_b) continue;
      double merged = (wa * sim[best_a][k] + wb * sim[best_b][k]) / (wa + wb);
      sim[best_a][k] = sim[k][best_a] = merged;
    }
    keep.rows.insert(keep.rows.end(), gone.rows.begin(), gone.rows.end());
    std::sort(keep.rows.begin(), keep.rows.end());
    keep.min_id = std::min(keep.min_id, gone.min_id);
    gone.alive = false;
  }

  std::vector<QueryCluster> out;
  for (const Node& node : nodes) {
    if (!node.alive) continue;
    QueryCluster c;
    std::set<std::string> attrs;
    for (std::size_t r : node.rows) {
      c.members.push_back(m.query_ids[r]);
      for (std::size_t col = 0; col < m.cols(); ++col) {
        if (m.cells[r][col]) attrs.insert(m.attributes[col]);
      }
    }
    std::sort(c.members.begin(), c.members.end());
    c.attributes.assign(attrs.begin(), attrs.end());
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const QueryCluster& a, const QueryCluster& b) {
    return a.members.front() < b.members.front();
  });
  return out;
}

std::string itemsets_to_csv(const std::vector<Itemset>& itemsets) {
  std::ostringstream out;
  out << "attributes;support\n";
  for (const Itemset& its : itemsets) {
    for (std::size_t i = 0; i < its.attributes.size(); ++i) {
      if (i) out << " ";
      out << its.attributes[i];
    }
    out << ";" << its.support << "\n";
  }
  return out.str();
}

std::string clusters_to_csv(const std::vector<QueryCluster>& clusters) {
  std::ostringstream out;
  out << "cluster_id;query_ids\n";
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    out << i << ";";
    for (std::size_t j = 0; j < clusters[i].members.size(); ++j) {
      if (j) out << " ";
      out << clusters[i].members[j];
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace advisor
