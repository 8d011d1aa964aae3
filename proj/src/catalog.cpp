#include "advisor/catalog.hpp"

#include <algorithm>
#include <unordered_set>

#include <json.hpp>

#include "advisor/common.hpp"
#include "advisor/errors.hpp"

namespace advisor {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& context) {
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end()) {
      throw ParseError("unknown key \"" + item.key() + "\" in " + context);
    }
  }
}

std::uint64_t require_positive_int(const json& obj, const char* key,
                                   const std::string& context) {
  if (!obj.contains(key)) {
    throw ParseError("missing key \"" + std::string(key) + "\" in " + context);
  }
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) {
    throw ParseError("key \"" + std::string(key) + "\" in " + context +
                     " must be a positive integer");
  }
  return v.get<std::uint64_t>();
}

std::string require_string(const json& obj, const char* key,
                           const std::string& context) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    throw ParseError("missing or non-string key \"" + std::string(key) +
                     "\" in " + context);
  }
  return obj.at(key).get<std::string>();
}

TableMeta parse_table(const json& jt) {
  if (!jt.is_object()) {
    throw ParseError("table entry must be an object");
  }
  std::string context = "table";
  if (jt.contains("name") && jt.at("name").is_string()) {
    context += " \"" + jt.at("name").get<std::string>() + "\"";
  }
  reject_unknown_keys(jt, {"name", "kind", "row_count", "primary_key",
                           "foreign_keys", "columns"}, context);

  TableMeta t;
  t.name = require_string(jt, "name", context);
  std::string kind = require_string(jt, "kind", context);
  if (kind == "fact") {
    t.kind = TableKind::Fact;
  } else if (kind == "dimension") {
    t.kind = TableKind::Dimension;
  } else {
    throw ParseError("table kind must be \"fact\" or \"dimension\" in " + context);
  }
  t.row_count = require_positive_int(jt, "row_count", context);
  t.primary_key = require_string(jt, "primary_key", context);

  if (!jt.contains("columns") || !jt.at("columns").is_array()) {
    throw ParseError("missing \"columns\" array in " + context);
  }
  for (const json& jc : jt.at("columns")) {
    reject_unknown_keys(jc, {"name", "width_bytes", "cardinality"},
                        "column of " + context);
    ColumnMeta c;
    c.name = require_string(jc, "name", "column of " + context);
    c.width_bytes = require_positive_int(jc, "width_bytes", "column \"" + c.name + "\"");
    c.cardinality = require_positive_int(jc, "cardinality", "column \"" + c.name + "\"");
    t.columns.push_back(std::move(c));
  }

  if (jt.contains("foreign_keys")) {
    if (!jt.at("foreign_keys").is_array()) {
      throw ParseError("\"foreign_keys\" must be an array in " + context);
    }
    for (const json& jf : jt.at("foreign_keys")) {
      reject_unknown_keys(jf, {"column", "references"}, "foreign key of " + context);
      ForeignKey fk;
      fk.column = require_string(jf, "column", "foreign key of " + context);
      std::string ref = require_string(jf, "references", "foreign key of " + context);
      auto dot = ref.find('.');
      if (dot == std::string::npos) {
        throw ParseError("foreign key reference \"" + ref +
                         "\" must be \"table.column\" in " + context);
      }
      fk.referenced_table = ref.substr(0, dot);
      fk.referenced_column = ref.substr(dot + 1);
      t.foreign_keys.push_back(std::move(fk));
    }
  }
  return t;
}

void validate(const std::vector<TableMeta>& tables) {
  std::unordered_set<std::string> names;
  std::size_t fact_count = 0;
  for (const TableMeta& t : tables) {
    if (!names.insert(t.name).second) {
      throw ValidationError("duplicate table name \"" + t.name + "\"");
    }
    if (t.kind == TableKind::Fact) {
      ++fact_count;
    }
    std::unordered_set<std::string> cols;
    for (const ColumnMeta& c : t.columns) {
      if (!cols.insert(c.name).second) {
        throw ValidationError("duplicate column \"" + c.name + "\" in table \"" +
                              t.name + "\"");
      }
      if (c.cardinality > t.row_count) {
        throw ValidationError("cardinality of \"" + t.name + "." + c.name +
                              "\" exceeds row_count");
      }
    }
    if (!cols.count(t.primary_key)) {
      throw ValidationError("primary key \"" + t.primary_key +
                            "\" is not a column of table \"" + t.name + "\"");
    }
  }
  if (fact_count != 1) {
    throw ValidationError("exactly one fact table required, found " +
                          std::to_string(fact_count));
  }

  auto find = [&](const std::string& name) -> const TableMeta* {
    for (const TableMeta& t : tables) {
      if (t.name == name) return &t;
    }
    return nullptr;
  };

  for (const TableMeta& t : tables) {
    // Star schema: only the fact table carries foreign keys; a dimension
    // with an FK would start a snowflake chain.
    if (t.kind == TableKind::Dimension && !t.foreign_keys.empty()) {
      throw ValidationError("snowflake schema: dimension \"" + t.name +
                            "\" has foreign keys");
    }
    for (const ForeignKey& fk : t.foreign_keys) {
      if (!t.find_column(fk.column)) {
        throw ValidationError("foreign key column \"" + fk.column +
                              "\" is not a column of table \"" + t.name + "\"");
      }
      const TableMeta* target = find(fk.referenced_table);
      if (target == nullptr) {
        throw ValidationError("dangling foreign key: \"" + t.name + "." +
                              fk.column + "\" references absent table \"" +
                              fk.referenced_table + "\"");
      }
      if (target->kind != TableKind::Dimension) {
        throw ValidationError("foreign key \"" + t.name + "." + fk.column +
                              "\" must reference a dimension table");
      }
      if (fk.referenced_column != target->primary_key) {
        throw ValidationError("foreign key \"" + t.name + "." + fk.column +
                              "\" must reference the primary key of \"" +
                              target->name + "\"");
      }
    }
  }
}

}  // namespace

const ColumnMeta* TableMeta::find_column(std::string_view column) const noexcept {
  for (const ColumnMeta& c : columns) {
    if (c.name == column) return &c;
  }
  return nullptr;
}

std::uint64_t TableMeta::row_width_bytes() const {
  std::uint64_t w = 0;
  for (const ColumnMeta& c : columns) w += c.width_bytes;
  return w;
}

Catalog::Catalog(std::vector<TableMeta> tables, std::uint64_t page_size_bytes)
    : tables_(std::move(tables)), page_size_bytes_(page_size_bytes) {
  if (page_size_bytes_ == 0) {
    throw ValidationError("page_size_bytes must be positive");
  }
  validate(tables_);
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    if (tables_[i].kind == TableKind::Fact) {
      fact_index_ = i;
      break;
    }
  }
}

const TableMeta* Catalog::find_table(std::string_view name) const noexcept {
  for (const TableMeta& t : tables_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const TableMeta& Catalog::table(std::string_view name) const {
  const TableMeta* t = find_table(name);
  if (t == nullptr) {
    throw UnknownTableError(std::string(name));
  }
  return *t;
}

const ColumnMeta& Catalog::attribute(std::string_view qualified) const {
  auto [table_name, column] = split_qualified(qualified);
  const TableMeta* t = find_table(table_name);
  if (t == nullptr) {
    throw UnknownAttributeError(std::string(qualified));
  }
  const ColumnMeta* c = t->find_column(column);
  if (c == nullptr) {
    throw UnknownAttributeError(std::string(qualified));
  }
  return *c;
}

std::uint64_t Catalog::table_pages(std::string_view table_name) const {
  const TableMeta& t = table(table_name);
  std::uint64_t pages = ceil_div(t.row_count * t.row_width_bytes(), page_size_bytes_);
  return pages == 0 ? 1 : pages;
}

bool Catalog::is_primary_key(std::string_view qualified) const {
  auto [table_name, column] = split_qualified(qualified);
  return table(table_name).primary_key == column;
}

bool Catalog::is_dimension_attribute(std::string_view qualified) const {
  auto [table_name, column] = split_qualified(qualified);
  const TableMeta& t = table(table_name);
  if (t.find_column(column) == nullptr) {
    throw UnknownAttributeError(std::string(qualified));
  }
  return t.kind == TableKind::Dimension;
}

std::vector<std::string> Catalog::fact_fk_columns_to(std::string_view dimension) const {
  std::vector<std::string> out;
  for (const ForeignKey& fk : fact().foreign_keys) {
    if (fk.referenced_table == dimension) out.push_back(fk.column);
  }
  return out;
}

Catalog load_catalog_from_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("catalog must be a JSON object");
  }
  reject_unknown_keys(doc, {"page_size_bytes", "tables"}, "catalog");
  std::uint64_t page_size = 8192;
  if (doc.contains("page_size_bytes")) {
    page_size = require_positive_int(doc, "page_size_bytes", "catalog");
  }
  if (!doc.contains("tables") || !doc.at("tables").is_array()) {
    throw ParseError("missing \"tables\" array in catalog");
  }
  std::vector<TableMeta> tables;
  for (const json& jt : doc.at("tables")) {
    tables.push_back(parse_table(jt));
  }
  return Catalog(std::move(tables), page_size);
}

Catalog load_catalog(const std::filesystem::path& path) {
  return load_catalog_from_text(read_text_file(path));
}

}  // namespace advisor
