#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace advisor {

struct ColumnMeta {
  std::string name;
  std::uint64_t width_bytes = 0;
  std::uint64_t cardinality = 0;  // distinct values, 1 <= cardinality <= row_count
};

enum class TableKind { Fact, Dimension };

struct ForeignKey {
  std::string column;            // local column on the fact table
  std::string referenced_table;  // dimension
  std::string referenced_column; // that dimension's primary key
};

struct TableMeta {
  std::string name;
  TableKind kind = TableKind::Dimension;
  std::uint64_t row_count = 0;
  std::string primary_key;
  std::vector<ForeignKey> foreign_keys;
  std::vector<ColumnMeta> columns;

  const ColumnMeta* find_column(std::string_view column) const noexcept;
  std::uint64_t row_width_bytes() const;
};

// Immutable star-schema metadata: one fact table, FK-linked dimensions,
// declared statistics (row counts, widths, cardinalities). Safe to share
// across threads once loaded.
class Catalog {
 public:
  Catalog(std::vector<TableMeta> tables, std::uint64_t page_size_bytes);

  const std::vector<TableMeta>& tables() const noexcept { return tables_; }
  std::uint64_t page_size_bytes() const noexcept { return page_size_bytes_; }

  const TableMeta& fact() const noexcept { return tables_[fact_index_]; }

  const TableMeta* find_table(std::string_view name) const noexcept;
  const TableMeta& table(std::string_view name) const;  // UnknownTable

  // Resolves "table.column"; exact, case-sensitive. UnknownAttribute on miss.
  const ColumnMeta& attribute(std::string_view qualified) const;

  // ceil(row_count * row_width / page_size), at least 1.
  std::uint64_t table_pages(std::string_view table_name) const;

  bool is_primary_key(std::string_view qualified) const;
  bool is_dimension_attribute(std::string_view qualified) const;

  // Fact-side FK columns joining to the given dimension, in catalog order.
  std::vector<std::string> fact_fk_columns_to(std::string_view dimension) const;

 private:
  std::vector<TableMeta> tables_;
  std::uint64_t page_size_bytes_;
  std::size_t fact_index_ = 0;
};

// Parses and validates the JSON catalog format. ParseError on malformed
// input (including unknown keys), ValidationError on violated invariants.
Catalog load_catalog(const std::filesystem::path& path);
Catalog load_catalog_from_text(const std::string& json_text);

}  // namespace advisor
