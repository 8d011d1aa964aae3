#include "advisor/sql_parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "advisor/common.hpp"
#include "advisor/errors.hpp"

namespace advisor {

const char* to_string(AggFunc f) {
  switch (f) {
    case AggFunc::Sum: return "SUM";
    case AggFunc::Count: return "COUNT";
    case AggFunc::Min: return "MIN";
    case AggFunc::Max: return "MAX";
    case AggFunc::Avg: return "AVG";
  }
  return "?";
}

std::string to_sql(const Aggregate& agg) {
  return std::string(to_string(agg.func)) + "(" + agg.argument + ")";
}

namespace {

enum class Tok {
  End, Ident, Number, String,
  Comma, LParen, RParen, Dot, Eq, Semi, Star
};

struct Token {
  Tok kind = Tok::End;
  std::string text;        // ident/number verbatim, string without quotes
  std::size_t offset = 0;  // byte offset in the source text
};

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = sql.size();
  while (i < n) {
    char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
      while (i < n && sql[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < n && (std::isalnum(static_cast<unsigned char>(sql[i])) || sql[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(sql.substr(start, i - start)), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < n && (std::isdigit(static_cast<unsigned char>(sql[i])) || sql[i] == '.')) ++i;
      out.push_back({Tok::Number, std::string(sql.substr(start, i - start)), start});
      continue;
    }
    if (c == '\'') {
      ++i;
      std::size_t body = i;
      while (i < n && sql[i] != '\'') ++i;
      if (i == n) {
        throw SyntaxError("unterminated string literal", start);
      }
      out.push_back({Tok::String, std::string(sql.substr(body, i - body)), start});
      ++i;
      continue;
    }
    Tok kind;
    switch (c) {
      case ',': kind = Tok::Comma; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '.': kind = Tok::Dot; break;
      case '=': kind = Tok::Eq; break;
      case ';': kind = Tok::Semi; break;
      case '*': kind = Tok::Star; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({kind, std::string(1, c), start});
    ++i;
  }
  out.push_back({Tok::End, "", n});
  return out;
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "SELECT", "FROM", "WHERE", "GROUP", "ORDER", "BY", "HAVING", "AS",
      "AND", "OR", "NOT", "IN", "BETWEEN", "JOIN", "INNER", "LEFT", "RIGHT",
      "FULL", "OUTER", "CROSS", "ON", "UNION", "LIMIT", "DISTINCT",
      "ASC", "DESC"};
  return words;
}

struct Parser {
  const std::vector<Token>& toks;
  const Catalog& catalog;
  std::size_t pos = 0;

  // alias (or bare table name) -> table name
  std::map<std::string, std::string> aliases;
  std::set<std::string> from_tables;

  const Token& cur() const { return toks[pos]; }
  const Token& peek(std::size_t ahead = 1) const {
    std::size_t i = pos + ahead;
    return i < toks.size() ? toks[i] : toks.back();
  }

  bool at_kw(const char* kw) const {
    return cur().kind == Tok::Ident && upper(cur().text) == kw;
  }
  bool accept_kw(const char* kw) {
    if (!at_kw(kw)) return false;
    ++pos;
    return true;
  }
  void expect_kw(const char* kw) {
    if (!accept_kw(kw)) {
      throw SyntaxError(std::string("expected ") + kw, cur().offset);
    }
  }
  Token expect(Tok kind, const char* what) {
    if (cur().kind != kind) {
      throw SyntaxError(std::string("expected ") + what, cur().offset);
    }
    return toks[pos++];
  }

  void reject_subquery_here() const {
    if (cur().kind == Tok::LParen && peek().kind == Tok::Ident &&
        upper(peek().text) == "SELECT") {
      throw UnsupportedFeatureError("subquery");
    }
  }

  std::string expect_ident(const char* what) {
    if (cur().kind != Tok::Ident) {
      throw SyntaxError(std::string("expected ") + what, cur().offset);
    }
    return toks[pos++].text;
  }

  // Resolves an attribute reference (qualified or bare) to "table.column".
  std::string parse_attr_ref() {
    std::string first = expect_ident("attribute");
    if (cur().kind == Tok::Dot) {
      ++pos;
      std::string column = expect_ident("column name");
      auto it = aliases.find(first);
      if (it == aliases.end()) {
        throw UnknownAttributeError("unknown table or alias \"" + first +
                                    "\" in " + first + "." + column);
      }
      std::string qualified = join_qualified(it->second, column);
      catalog.attribute(qualified);  // throws UnknownAttribute on miss
      return qualified;
    }
    // Bare column: resolve against the FROM tables; must be unambiguous.
    std::string found;
    for (const std::string& t : from_tables) {
      if (catalog.table(t).find_column(first) != nullptr) {
        if (!found.empty()) {
          throw UnknownAttributeError("ambiguous column \"" + first + "\"");
        }
        found = join_qualified(t, first);
      }
    }
    if (found.empty()) {
      throw UnknownAttributeError("column \"" + first +
                                  "\" not found in any joined table");
    }
    return found;
  }

  void parse_table_ref() {
    std::string table = expect_ident("table name");
    if (catalog.find_table(table) == nullptr) {
      throw UnknownTableError(table);
    }
    std::string alias = table;
    if (accept_kw("AS")) {
      alias = expect_ident("alias");
    } else if (cur().kind == Tok::Ident &&
               !reserved_words().count(upper(cur().text))) {
      alias = toks[pos++].text;
    }
    if (aliases.count(alias) && aliases[alias] != table) {
      throw SyntaxError("duplicate alias \"" + alias + "\"", cur().offset);
    }
    aliases[alias] = table;
    aliases.emplace(table, table);  // the bare name stays usable
    from_tables.insert(table);
  }

  Token parse_literal() {
    reject_subquery_here();
    if (cur().kind == Tok::Number || cur().kind == Tok::String) {
      return toks[pos++];
    }
    throw SyntaxError("expected literal value", cur().offset);
  }

  Aggregate parse_aggregate(AggFunc func) {
    ++pos;  // the function name
    expect(Tok::LParen, "(");
    Aggregate agg;
    agg.func = func;
    if (cur().kind == Tok::Star) {
      if (func != AggFunc::Count) {
        throw SyntaxError("* is only valid in COUNT", cur().offset);
      }
      ++pos;
      agg.argument = "*";
    } else {
      agg.argument = parse_attr_ref();
    }
    expect(Tok::RParen, ")");
    return agg;
  }

  bool at_aggregate() const {
    if (cur().kind != Tok::Ident || peek().kind != Tok::LParen) return false;
    std::string u = upper(cur().text);
    return u == "SUM" || u == "COUNT" || u == "MIN" || u == "MAX" || u == "AVG";
  }

  AggFunc agg_func_here() const {
    std::string u = upper(cur().text);
    if (u == "SUM") return AggFunc::Sum;
    if (u == "COUNT") return AggFunc::Count;
    if (u == "MIN") return AggFunc::Min;
    if (u == "MAX") return AggFunc::Max;
    return AggFunc::Avg;
  }

  void skip_optional_alias() {
    if (accept_kw("AS")) {
      expect_ident("alias");
    } else if (cur().kind == Tok::Ident &&
               !reserved_words().count(upper(cur().text))) {
      ++pos;
    }
  }

  ParsedQuery parse_statement() {
    ParsedQuery q;
    expect_kw("SELECT");
    if (at_kw("DISTINCT")) {
      throw UnsupportedFeatureError("DISTINCT");
    }

    // The select list is parsed after FROM so attribute references can be
    // resolved; remember its token range and come back.
    std::size_t select_start = pos;
    int depth = 0;
    while (!(depth == 0 && at_kw("FROM"))) {
      if (cur().kind == Tok::End) {
        throw SyntaxError("expected FROM", cur().offset);
      }
      if (cur().kind == Tok::LParen) ++depth;
      if (cur().kind == Tok::RParen) --depth;
      ++pos;
    }
    std::size_t select_end = pos;

    expect_kw("FROM");
    parse_table_ref();
    while (true) {
      if (cur().kind == Tok::Comma) {
        ++pos;
        parse_table_ref();
        continue;
      }
      if (at_kw("LEFT") || at_kw("RIGHT") || at_kw("FULL") || at_kw("OUTER") ||
          at_kw("CROSS")) {
        throw UnsupportedFeatureError(upper(cur().text) + " JOIN");
      }
      if (at_kw("INNER") || at_kw("JOIN")) {
        accept_kw("INNER");
        expect_kw("JOIN");
        parse_table_ref();
        expect_kw("ON");
        std::string lhs = parse_attr_ref();
        expect(Tok::Eq, "=");
        std::string rhs = parse_attr_ref();
        add_join_edge(q, lhs, rhs);
        continue;
      }
      break;
    }

    // Revisit the select list now that aliases are known.
    std::size_t after_from = pos;
    pos = select_start;
    parse_select_list(q, select_end);
    pos = after_from;

    if (accept_kw("WHERE")) {
      parse_conjunction(q);
    }
    if (at_kw("GROUP")) {
      ++pos;
      expect_kw("BY");
      q.group_by.push_back(parse_attr_ref());
      while (cur().kind == Tok::Comma) {
        ++pos;
        q.group_by.push_back(parse_attr_ref());
      }
    }
    if (at_kw("HAVING")) {
      throw UnsupportedFeatureError("HAVING");
    }
    if (at_kw("ORDER")) {
      // Accepted but contributes nothing.
      ++pos;
      expect_kw("BY");
      do {
        parse_attr_ref();
        if (at_kw("ASC") || at_kw("DESC")) ++pos;
      } while (cur().kind == Tok::Comma && (++pos, true));
    }
    if (at_kw("UNION") || at_kw("LIMIT")) {
      throw UnsupportedFeatureError(upper(cur().text));
    }
    return q;
  }

  void parse_select_list(ParsedQuery& q, std::size_t end_pos) {
    while (true) {
      reject_subquery_here();
      if (cur().kind == Tok::Star) {
        ++pos;
      } else if (at_aggregate()) {
        q.aggregates.push_back(parse_aggregate(agg_func_here()));
        skip_optional_alias();
      } else if (cur().kind == Tok::Ident) {
        parse_attr_ref();  // projection resolves but is never extracted
        skip_optional_alias();
      } else {
        throw SyntaxError("expected select item", cur().offset);
      }
      if (pos < end_pos && cur().kind == Tok::Comma) {
        ++pos;
        continue;
      }
      break;
    }
    if (pos != end_pos) {
      throw SyntaxError("malformed select list", cur().offset);
    }
  }

  void parse_conjunction(ParsedQuery& q) {
    while (true) {
      parse_condition(q);
      if (accept_kw("AND")) continue;
      if (at_kw("OR")) {
        throw UnsupportedFeatureError("OR");
      }
      break;
    }
  }

  void parse_condition(ParsedQuery& q) {
    reject_subquery_here();
    if (at_kw("NOT")) {
      throw UnsupportedFeatureError("NOT");
    }
    if (cur().kind == Tok::LParen) {
      throw UnsupportedFeatureError("parenthesized condition");
    }
    std::string attr = parse_attr_ref();
    if (cur().kind == Tok::Eq) {
      ++pos;
      if (cur().kind == Tok::Ident) {
        // attribute = attribute is a join condition
        std::string rhs = parse_attr_ref();
        add_join_edge(q, attr, rhs);
        return;
      }
      Token lit = parse_literal();
      q.restrictions.push_back(
          {attr, PredOp::Eq, {lit.text}, {lit.kind == Tok::String}});
      return;
    }
    if (at_kw("BETWEEN")) {
      ++pos;
      Token low = parse_literal();
      expect_kw("AND");
      Token high = parse_literal();
      q.restrictions.push_back({attr,
                                PredOp::Range,
                                {low.text, high.text},
                                {low.kind == Tok::String, high.kind == Tok::String}});
      return;
    }
    if (at_kw("IN")) {
      ++pos;
      reject_subquery_here();
      expect(Tok::LParen, "(");
      Predicate pred{attr, PredOp::In, {}, {}};
      while (true) {
        Token lit = parse_literal();
        pred.values.push_back(lit.text);
        pred.quoted.push_back(lit.kind == Tok::String);
        if (cur().kind == Tok::Comma) {
          ++pos;
          continue;
        }
        break;
      }
      expect(Tok::RParen, ")");
      q.restrictions.push_back(std::move(pred));
      return;
    }
    throw SyntaxError("expected =, BETWEEN or IN", cur().offset);
  }

  void add_join_edge(ParsedQuery& q, std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    JoinEdge edge{std::move(a), std::move(b)};
    if (std::find(q.join_edges.begin(), q.join_edges.end(), edge) ==
        q.join_edges.end()) {
      q.join_edges.push_back(std::move(edge));
    }
  }

  // Star-shape checks: the fact table is present, every join equality is a
  // fact FK = dimension PK pair, and every dimension is joined to the fact.
  void validate_star(ParsedQuery& q) {
    const TableMeta& fact = catalog.fact();
    q.tables.assign(from_tables.begin(), from_tables.end());
    std::sort(q.tables.begin(), q.tables.end());
    if (!from_tables.count(fact.name)) {
      throw UnsupportedFeatureError("query does not join the fact table \"" +
                                    fact.name + "\"");
    }
    std::set<std::string> joined = {fact.name};
    for (const JoinEdge& e : q.join_edges) {
      auto [lt, lc] = split_qualified(e.left);
      auto [rt, rc] = split_qualified(e.right);
      bool ok = false;
      for (const ForeignKey& fk : fact.foreign_keys) {
        std::string fk_attr = join_qualified(fact.name, fk.column);
        std::string pk_attr = join_qualified(fk.referenced_table, fk.referenced_column);
        if ((e.left == fk_attr && e.right == pk_attr) ||
            (e.left == pk_attr && e.right == fk_attr)) {
          ok = true;
          joined.insert(fk.referenced_table);
          break;
        }
      }
      if (!ok) {
        throw UnsupportedFeatureError("non-star join " + e.left + " = " + e.right);
      }
    }
    for (const std::string& t : q.tables) {
      if (!joined.count(t)) {
        throw UnsupportedFeatureError("table \"" + t +
                                      "\" is not joined to the fact table");
      }
    }
    std::sort(q.join_edges.begin(), q.join_edges.end());
  }
};

}  // namespace

ParsedQuery parse_query(std::string_view sql, const Catalog& catalog) {
  std::vector<Token> toks = tokenize(sql);
  Parser p{toks, catalog};
  ParsedQuery q = p.parse_statement();
  if (p.cur().kind == Tok::Semi) ++p.pos;
  if (p.cur().kind != Tok::End) {
    throw SyntaxError("trailing input after statement", p.cur().offset);
  }
  p.validate_star(q);
  return q;
}

std::vector<ParsedQuery> parse_workload(std::string_view text, const Catalog& catalog) {
  std::vector<Token> toks = tokenize(text);
  std::vector<ParsedQuery> out;
  Parser p{toks, catalog};
  while (p.cur().kind != Tok::End) {
    if (p.cur().kind == Tok::Semi) {
      ++p.pos;
      continue;
    }
    int ordinal = static_cast<int>(out.size()) + 1;
    try {
      p.aliases.clear();
      p.from_tables.clear();
      ParsedQuery q = p.parse_statement();
      if (p.cur().kind != Tok::Semi && p.cur().kind != Tok::End) {
        throw SyntaxError("expected ;", p.cur().offset);
      }
      p.validate_star(q);
      q.id = ordinal - 1;
      out.push_back(std::move(q));
    } catch (const Error& e) {
      rethrow_with_context(e, "statement " + std::to_string(ordinal));
    }
  }
  return out;
}

std::vector<ParsedQuery> load_workload(const std::filesystem::path& path,
                                       const Catalog& catalog) {
  return parse_workload(read_text_file(path), catalog);
}

}  // namespace advisor
