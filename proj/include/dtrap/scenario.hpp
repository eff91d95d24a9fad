#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dtrap/bernoulli.hpp"
#include "dtrap/forking.hpp"

namespace dtrap {

enum class QueryKind { Perfect, Constants, PIndep, SepIndep, Trap, Forking, BernoulliPerfect, Trdeg };

struct Query {
  QueryKind kind = QueryKind::Perfect;
  int line = 0;
  std::vector<std::string> names;  // fields, in grammar order
  std::vector<Rational> elems, base;
  std::vector<std::string> ids;
  int order = 0;
  std::optional<int> degree;
  std::uint32_t bp = 0;
  std::vector<int> ks;
};

struct Scenario {
  std::uint32_t p = 0;
  int m = 1;
  std::optional<DiffPresentation> ambient;
  std::vector<SubfieldDecl> fields;
  std::vector<Query> queries;

  const DiffPresentation& E() const {
    if (!ambient) throw Error(ErrorCode::Precondition, "scenario has no ambient field");
    return *ambient;
  }
  const SubfieldDecl* find_field(std::string_view name) const {
    for (auto& f : fields)
      if (f.name == name) return &f;
    return nullptr;
  }
  /// A declared field, or the ambient viewed as a subfield of itself.
  SubfieldDecl field_or_ambient(std::string_view name) const {
    if (auto* f = find_field(name)) return *f;
    if (ambient && ambient->name() == name) return identity_subfield(*ambient);
    throw Error(ErrorCode::UnknownName, "no field named " + std::string(name));
  }
};

namespace detail {

struct Token {
  std::string text;
  int col = 0;  // 1-based
};

inline std::vector<Token> split_words(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({std::string(line.substr(i, j - i)), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !ident_start(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!ident_char(static_cast<unsigned char>(c))) return false;
  return true;
}

class ScenarioParser {
 public:
  explicit ScenarioParser(std::string_view text) : text_(text) {}

  Scenario parse() {
    std::size_t start = 0;
    while (start <= text_.size()) {
      std::size_t end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      ++line_no_;
      std::string_view line = text_.substr(start, end - start);
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      line_ = line;
      auto words = split_words(line);
      if (!words.empty()) statement(words);
      start = end + 1;
    }
    close_block();
    if (!sc_.p) fail(ErrorCode::ParseError, "missing 'prime' line", 1, "");
    return std::move(sc_);
  }

 private:
  enum class Block { None, Ambient, Field };

  [[noreturn]] void fail(ErrorCode code, const std::string& msg, int col, const std::string& token) const {
    throw SourceError(code, msg, line_no_, col, token);
  }
  [[noreturn]] void fail(ErrorCode code, const std::string& msg, const Token& t) const {
    fail(code, msg, t.col, t.text);
  }

  int integer(const Token& t) const {
    try {
      std::size_t used = 0;
      long v = std::stol(t.text, &used);
      if (used != t.text.size() || v < -1000000 || v > 1000000) throw std::invalid_argument("");
      return static_cast<int>(v);
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "expected an integer", t);
    }
  }

  void expect_count(const std::vector<Token>& w, std::size_t n) const {
    if (w.size() < n) fail(ErrorCode::ParseError, "incomplete '" + w[0].text + "' line", static_cast<int>(line_.size()) + 1, "");
    if (w.size() > n) fail(ErrorCode::ParseError, "unexpected token", w[n]);
  }

  std::string name_token(const Token& t) const {
    if (!is_identifier(t.text)) fail(ErrorCode::ParseError, "expected a name", t);
    return t.text;
  }

  // Expression text running from column `col` (1-based) to `stop` (exclusive byte offset or npos).
  Rational expression(int col, std::size_t stop, const std::vector<Symbol>& scope) const {
    std::size_t from = static_cast<std::size_t>(col - 1);
    std::string_view text = line_.substr(from, stop == std::string_view::npos ? std::string_view::npos : stop - from);
    SymbolResolver resolve = [&](std::string_view name) -> std::optional<Symbol> {
      for (Symbol s : scope)
        if (s.name() == name) return s;
      return std::nullopt;
    };
    try {
      return read_expression(text, PrimeField(sc_.p), resolve);
    } catch (const ExprError& e) {
      ErrorCode code = e.code == ErrorCode::UnknownVariable ? ErrorCode::UnknownName : e.code;
      std::size_t off = e.offset == std::string_view::npos ? text.size() : e.offset;
      fail(code, e.message, col + static_cast<int>(off), e.token);
    }
  }

  void statement(const std::vector<Token>& w) {
    const std::string& kw = w[0].text;
    if (kw == "prime") {
      expect_count(w, 2);
      if (sc_.p) fail(ErrorCode::DuplicateName, "prime declared twice", w[0]);
      int p = integer(w[1]);
      if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)) || p > 65521)
        fail(ErrorCode::BadPrime, "not a supported prime (2 <= p <= 65521)", w[1]);
      sc_.p = static_cast<std::uint32_t>(p);
    } else if (kw == "derivations") {
      expect_count(w, 2);
      if (seen_m_) fail(ErrorCode::DuplicateName, "derivations declared twice", w[0]);
      if (block_ != Block::None || sc_.ambient) fail(ErrorCode::ParseError, "derivations must precede the ambient", w[0]);
      int m = integer(w[1]);
      if (m < 1 || m > 16) fail(ErrorCode::ParseError, "number of derivations must lie in 1..16", w[1]);
      sc_.m = m;
      seen_m_ = true;
    } else if (kw == "ambient") {
      expect_count(w, 2);
      if (!sc_.p) fail(ErrorCode::ParseError, "'prime' must come first", w[0]);
      if (sc_.ambient || block_ == Block::Ambient) fail(ErrorCode::DuplicateName, "a second ambient", w[1]);
      close_block();
      open(Block::Ambient, w[1]);
    } else if (kw == "field") {
      expect_count(w, 2);
      close_block();
      if (!sc_.ambient) fail(ErrorCode::ParseError, "fields must follow the ambient", w[0]);
      open(Block::Field, w[1]);
    } else if (kw == "gens") {
      gens(w);
    } else if (kw == "embed") {
      embed(w);
    } else if (kw == "query") {
      close_block();
      query(w);
    } else if (kw.size() >= 1 && kw[0] == 'd' && (kw.size() == 1 || std::all_of(kw.begin() + 1, kw.end(), ::isdigit))) {
      image(w);
    } else {
      fail(ErrorCode::ParseError, "unknown statement", w[0]);
    }
  }

  void open(Block b, const Token& name) {
    std::string n = name_token(name);
    if ((sc_.ambient && sc_.ambient->name() == n) || sc_.find_field(n) || (block_ != Block::None && cur_name_ == n))
      fail(ErrorCode::DuplicateName, "name already declared", name);
    block_ = b;
    cur_name_ = n;
    cur_line_ = line_no_;
    cur_.reset();
    cur_embed_.clear();
  }

  void gens(const std::vector<Token>& w) {
    if (block_ == Block::None) fail(ErrorCode::ParseError, "'gens' outside a block", w[0]);
    if (cur_) fail(ErrorCode::DuplicateName, "'gens' given twice", w[0]);
    std::vector<Symbol> vars;
    for (std::size_t i = 1; i < w.size(); ++i) {
      Symbol s = Symbol::intern(name_token(w[i]));
      if (std::find(vars.begin(), vars.end(), s) != vars.end()) fail(ErrorCode::DuplicateName, "generator listed twice", w[i]);
      vars.push_back(s);
    }
    cur_.emplace(cur_name_, sc_.p, sc_.m, vars);
  }

  void ensure_gens() {
    // a field block without a gens line is the prime field
    if (!cur_) cur_.emplace(cur_name_, sc_.p, sc_.m, std::vector<Symbol>{});
  }

  void embed(const std::vector<Token>& w) {
    if (block_ != Block::Field) fail(ErrorCode::ParseError, "'embed' outside a field block", w[0]);
    ensure_gens();
    if (w.size() < 4 || w[2].text != "->") fail(ErrorCode::ParseError, "expected 'embed <gen> -> <expr>'", w.size() > 2 ? w[2] : w[0]);
    Symbol u = Symbol::intern(name_token(w[1]));
    if (!cur_->has_var(u)) fail(ErrorCode::UnknownName, "not a generator of " + cur_name_, w[1]);
    if (cur_embed_.count(u)) fail(ErrorCode::DuplicateName, "embedding given twice", w[1]);
    cur_embed_.emplace(u, expression(w[3].col, std::string_view::npos, sc_.ambient->vars()));
  }

  void image(const std::vector<Token>& w) {
    if (block_ == Block::None) fail(ErrorCode::ParseError, "derivation image outside a block", w[0]);
    ensure_gens();
    int i = 1;
    if (w[0].text.size() == 1) {
      if (sc_.m != 1) fail(ErrorCode::ParseError, "write d1 .. d" + std::to_string(sc_.m) + " with several derivations", w[0]);
    } else {
      i = integer({w[0].text.substr(1), w[0].col + 1});
      if (i < 1 || i > sc_.m) fail(ErrorCode::ParseError, "no such derivation", w[0]);
    }
    if (w.size() < 4 || w[2].text != "=") fail(ErrorCode::ParseError, "expected 'd <gen> = <expr|?>'", w.size() > 2 ? w[2] : w[0]);
    Symbol x = Symbol::intern(name_token(w[1]));
    if (!cur_->has_var(x)) fail(ErrorCode::UnknownName, "not a generator of " + cur_name_, w[1]);
    auto& seen = images_seen_[{i, x}];
    if (seen) fail(ErrorCode::DuplicateName, "image given twice", w[1]);
    seen = true;
    if (w.size() == 4 && w[3].text == "?") {
      cur_->set_image(i - 1, x, std::nullopt);
      return;
    }
    cur_->set_image(i - 1, x, expression(w[3].col, std::string_view::npos, cur_->vars()));
  }

  void close_block() {
    if (block_ == Block::None) return;
    ensure_gens();
    for (int i = 0; i < cur_->m(); ++i)
      for (Symbol v : cur_->vars())
        if (!images_seen_.count({i + 1, v}))
          throw SourceError(ErrorCode::ParseError, cur_name_ + ": no image for d" + std::to_string(i + 1) + " " + v.name(),
                            cur_line_, 1, cur_name_);
    if (block_ == Block::Ambient) {
      sc_.ambient = std::move(*cur_);
    } else {
      for (Symbol v : cur_->vars())
        if (!cur_embed_.count(v))
          throw SourceError(ErrorCode::ParseError, cur_name_ + ": no embedding for " + v.name(), cur_line_, 1, cur_name_);
      sc_.fields.push_back({cur_name_, std::move(*cur_), std::move(cur_embed_)});
    }
    cur_.reset();
    cur_embed_.clear();
    images_seen_.clear();
    block_ = Block::None;
  }

  std::string field_name(const Token& t) const {
    std::string n = name_token(t);
    if (sc_.find_field(n)) return n;
    if (sc_.ambient && sc_.ambient->name() == n) return n;
    fail(ErrorCode::UnknownName, "no field of this name", t);
  }

  void keyword(const std::vector<Token>& w, std::size_t i, const char* kw) const {
    if (i >= w.size()) fail(ErrorCode::ParseError, std::string("expected '") + kw + "'", static_cast<int>(line_.size()) + 1, "");
    if (w[i].text != kw) fail(ErrorCode::ParseError, std::string("expected '") + kw + "'", w[i]);
  }

  // Reads "{e1, e2, ...}" starting at byte offset `from`; returns items with
  // their columns and the offset just past '}'.
  std::vector<std::pair<std::string, int>> braces(std::size_t& from) const {
    while (from < line_.size() && std::isspace(static_cast<unsigned char>(line_[from]))) ++from;
    if (from >= line_.size() || line_[from] != '{')
      fail(ErrorCode::ParseError, "expected '{'", static_cast<int>(from) + 1, from < line_.size() ? std::string(1, line_[from]) : "");
    std::size_t close = line_.find('}', from);
    if (close == std::string_view::npos) fail(ErrorCode::ParseError, "missing '}'", static_cast<int>(from) + 1, "{");
    std::vector<std::pair<std::string, int>> items;
    std::size_t s = from + 1;
    while (s <= close) {
      std::size_t e = line_.find(',', s);
      if (e == std::string_view::npos || e > close) e = close;
      std::string_view item = line_.substr(s, e - s);
      std::size_t a = 0;
      while (a < item.size() && std::isspace(static_cast<unsigned char>(item[a]))) ++a;
      std::size_t b = item.size();
      while (b > a && std::isspace(static_cast<unsigned char>(item[b - 1]))) --b;
      if (a == b) {
        if (e != close || !items.empty()) fail(ErrorCode::ParseError, "empty list item", static_cast<int>(s) + 1, "");
      } else {
        items.emplace_back(std::string(item.substr(a, b - a)), static_cast<int>(s + a) + 1);
      }
      s = e + 1;
    }
    from = close + 1;
    return items;
  }

  std::vector<Rational> expr_list(std::size_t& from, const std::vector<Symbol>& scope) const {
    std::vector<Rational> out;
    for (auto& [text, col] : braces(from))
      out.push_back(expression(col, static_cast<std::size_t>(col - 1) + text.size(), scope));
    return out;
  }

  // Tokens after byte offset `from`.
  std::vector<Token> rest(std::size_t from) const {
    auto ws = split_words(line_.substr(from));
    for (auto& t : ws) t.col += static_cast<int>(from);
    return ws;
  }

  void query(const std::vector<Token>& w) {
    if (w.size() < 2) fail(ErrorCode::ParseError, "expected a query kind", static_cast<int>(line_.size()) + 1, "");
    Query q;
    q.line = line_no_;
    const std::string& k = w[1].text;
    auto need_ambient = [&] {
      if (!sc_.ambient) fail(ErrorCode::ParseError, "query before the ambient", w[1]);
    };
    if (k == "perfect" || k == "constants") {
      need_ambient();
      expect_count(w, 3);
      q.kind = k == "perfect" ? QueryKind::Perfect : QueryKind::Constants;
      q.names = {field_name(w[2])};
    } else if (k == "pindep" || k == "trdeg") {
      need_ambient();
      q.kind = k == "pindep" ? QueryKind::PIndep : QueryKind::Trdeg;
      std::size_t from = static_cast<std::size_t>(w[1].col - 1) + k.size();
      q.elems = expr_list(from, sc_.ambient->vars());
      if (q.elems.empty()) fail(ErrorCode::ParseError, "empty element list", w[1]);
      auto r = rest(from);
      keyword(r, 0, "over");
      from = static_cast<std::size_t>(r[0].col - 1) + 4;
      q.base = expr_list(from, sc_.ambient->vars());
      r = rest(from);
      keyword(r, 0, "in");
      if (r.size() < 2) fail(ErrorCode::ParseError, "expected the ambient name", static_cast<int>(line_.size()) + 1, "");
      if (r[1].text != sc_.ambient->name()) fail(ErrorCode::UnknownName, "not the ambient", r[1]);
      q.names = {r[1].text};
      std::size_t used = 2;
      if (q.kind == QueryKind::Trdeg && r.size() >= 4 && r[2].text == "degree") {
        q.degree = integer(r[3]);
        if (*q.degree < 1) fail(ErrorCode::ParseError, "degree must be positive", r[3]);
        used = 4;
      }
      if (r.size() > used) fail(ErrorCode::ParseError, "unexpected token", r[used]);
    } else if (k == "sepindep") {
      need_ambient();
      q.kind = QueryKind::SepIndep;
      std::size_t from = static_cast<std::size_t>(w[1].col - 1) + k.size();
      auto items = braces(from);
      auto r = rest(from);
      keyword(r, 0, "in");
      if (r.size() != 2) fail(ErrorCode::ParseError, "expected 'in <field>'", r.size() > 2 ? r[2] : r[0]);
      q.names = {field_name(r[1])};
      SubfieldDecl F = sc_.field_or_ambient(q.names[0]);
      for (auto& [text, col] : items) {
        if (!is_identifier(text)) fail(ErrorCode::ParseError, "expected a generator name", col, text);
        if (!F.own.has_var(Symbol::intern(text))) fail(ErrorCode::UnknownName, "not a generator of " + q.names[0], col, text);
        if (std::find(q.ids.begin(), q.ids.end(), text) != q.ids.end()) fail(ErrorCode::DuplicateName, "listed twice", col, text);
        q.ids.push_back(text);
      }
    } else if (k == "trap") {
      need_ambient();
      expect_count(w, 5);
      q.kind = QueryKind::Trap;
      q.names = {field_name(w[2])};
      keyword(w, 3, "order");
      q.order = integer(w[4]);
      if (q.order < 1) fail(ErrorCode::ParseError, "order must be positive", w[4]);
    } else if (k == "forking") {
      need_ambient();
      expect_count(w, 10);
      q.kind = QueryKind::Forking;
      keyword(w, 4, "over");
      keyword(w, 6, "compositum");
      keyword(w, 8, "order");
      q.names = {field_name(w[2]), field_name(w[3]), field_name(w[5]), field_name(w[7])};
      q.order = integer(w[9]);
      if (q.order < 1) fail(ErrorCode::ParseError, "order must be positive", w[9]);
    } else if (k == "bernoulli-perfect") {
      expect_count(w, 4);
      q.kind = QueryKind::BernoulliPerfect;
      if (w[2].text.rfind("p=", 0) != 0) fail(ErrorCode::ParseError, "expected p=<int>", w[2]);
      int p = integer({w[2].text.substr(2), w[2].col + 2});
      if (p < 2 || p > 65521 || !is_prime(static_cast<std::uint64_t>(p))) fail(ErrorCode::BadPrime, "not a supported prime", w[2]);
      q.bp = static_cast<std::uint32_t>(p);
      if (w[3].text.rfind("k=", 0) != 0) fail(ErrorCode::ParseError, "expected k=<int>[,<int>...]", w[3]);
      std::string ks = w[3].text.substr(2);
      std::size_t s = 0;
      while (true) {
        std::size_t e = ks.find(',', s);
        std::string part = ks.substr(s, e == std::string::npos ? std::string::npos : e - s);
        int kv = integer({part, w[3].col + 2 + static_cast<int>(s)});
        if (kv < 1 || kv > 6) fail(ErrorCode::ParseError, "k must lie in 1..6", w[3]);
        q.ks.push_back(kv);
        if (e == std::string::npos) break;
        s = e + 1;
      }
    } else {
      fail(ErrorCode::ParseError, "unknown query kind", w[1]);
    }
    sc_.queries.push_back(std::move(q));
  }

  std::string_view text_;
  std::string_view line_;
  int line_no_ = 0;
  Scenario sc_;
  bool seen_m_ = false;
  Block block_ = Block::None;
  std::string cur_name_;
  int cur_line_ = 0;
  std::optional<DiffPresentation> cur_;
  std::map<Symbol, Rational> cur_embed_;
  std::map<std::pair<int, Symbol>, bool> images_seen_;
};

}  // namespace detail

/// Parses scenario text. Errors are SourceError with line and column.
inline Scenario parse_scenario(std::string_view text) { return detail::ScenarioParser(text).parse(); }

inline std::string query_text(const Query& q) {
  auto list = [](const std::vector<Rational>& xs) {
    std::string s = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i].str();
    return s + "}";
  };
  switch (q.kind) {
    case QueryKind::Perfect: return "perfect " + q.names[0];
    case QueryKind::Constants: return "constants " + q.names[0];
    case QueryKind::PIndep:
    case QueryKind::Trdeg: {
      std::string s = std::string(q.kind == QueryKind::PIndep ? "pindep " : "trdeg ") + list(q.elems) + " over " +
                      list(q.base) + " in " + q.names[0];
      if (q.degree) s += " degree " + std::to_string(*q.degree);
      return s;
    }
    case QueryKind::SepIndep: {
      std::string s = "sepindep {";
      for (std::size_t i = 0; i < q.ids.size(); ++i) s += (i ? ", " : "") + q.ids[i];
      return s + "} in " + q.names[0];
    }
    case QueryKind::Trap: return "trap " + q.names[0] + " order " + std::to_string(q.order);
    case QueryKind::Forking:
      return "forking " + q.names[0] + " " + q.names[1] + " over " + q.names[2] + " compositum " + q.names[3] + " order " +
             std::to_string(q.order);
    case QueryKind::BernoulliPerfect: {
      std::string s = "bernoulli-perfect p=" + std::to_string(q.bp) + " k=";
      for (std::size_t i = 0; i < q.ks.size(); ++i) s += (i ? "," : "") + std::to_string(q.ks[i]);
      return s;
    }
  }
  return {};
}

namespace detail {

inline void print_images(std::ostringstream& out, const DiffPresentation& d) {
  for (int i = 0; i < d.m(); ++i)
    for (Symbol v : d.vars()) {
      out << (d.m() == 1 ? std::string("d") : "d" + std::to_string(i + 1)) << ' ' << v.name() << " = ";
      const Image& img = d.image(i, v);
      out << (img ? img->str() : "?") << '\n';
    }
}

inline void print_gens(std::ostringstream& out, const DiffPresentation& d) {
  if (d.vars().empty()) return;
  out << "gens";
  for (Symbol v : d.vars()) out << ' ' << v.name();
  out << '\n';
}

}  // namespace detail

/// Canonical text: parse(print(s)) reproduces s.
inline std::string print_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "prime " << sc.p << '\n' << "derivations " << sc.m << '\n';
  if (sc.ambient) {
    out << "\nambient " << sc.ambient->name() << '\n';
    detail::print_gens(out, *sc.ambient);
    detail::print_images(out, *sc.ambient);
  }
  for (auto& f : sc.fields) {
    out << "\nfield " << f.name << '\n';
    detail::print_gens(out, f.own);
    for (Symbol v : f.own.vars()) out << "embed " << v.name() << " -> " << f.embedding.at(v).str() << '\n';
    detail::print_images(out, f.own);
  }
  if (!sc.queries.empty()) out << '\n';
  for (auto& q : sc.queries) out << "query " << query_text(q) << '\n';
  return out.str();
}

inline bool operator==(const Query& a, const Query& b) {
  return a.kind == b.kind && a.names == b.names && a.elems == b.elems && a.base == b.base && a.ids == b.ids &&
         a.order == b.order && a.degree == b.degree && a.bp == b.bp && a.ks == b.ks;
}

/// Structural equality, ignoring source line numbers.
inline bool same_scenario(const Scenario& a, const Scenario& b) {
  if (a.p != b.p || a.m != b.m || a.ambient.has_value() != b.ambient.has_value()) return false;
  if (a.ambient && (!(*a.ambient == *b.ambient) || a.ambient->name() != b.ambient->name())) return false;
  if (a.fields.size() != b.fields.size() || !(a.queries == b.queries)) return false;
  for (std::size_t i = 0; i < a.fields.size(); ++i) {
    auto &x = a.fields[i], &y = b.fields[i];
    if (x.name != y.name || !(x.own == y.own) || x.embedding != y.embedding) return false;
  }
  return true;
}

struct ValidationResult {
  bool ok = true;
  std::vector<std::string> issues;  // failures
  std::vector<std::string> notes;   // warnings and undecided checks
};

/// Commutation of every presentation and faithfulness of every embedding.
inline ValidationResult validate(const Scenario& sc, const EngineConfig& cfg = {}) {
  ValidationResult r;
  auto fail = [&](const std::string& s) {
    r.ok = false;
    r.issues.push_back(s);
  };
  if (!sc.ambient) {
    if (!sc.fields.empty()) fail("fields declared without an ambient");
    return r;
  }
  auto commute = [&](const DiffPresentation& d, const std::string& what) {
    auto v = check_commutation(d);
    if (v.is_false()) fail(what + ": " + v.reason + " (" + describe(v.witnesses.at(0)) + ")");
    for (auto& n : v.notes) r.notes.push_back(what + ": " + n);
  };
  commute(*sc.ambient, "ambient " + sc.ambient->name());
  for (auto& f : sc.fields) {
    commute(f.own, "field " + f.name);
    try {
      auto v = check_embedding(f, *sc.ambient, cfg);
      if (v.is_false()) {
        std::string w = v.witnesses.empty() ? "" : " (" + describe(v.witnesses.front()) + ")";
        fail("field " + f.name + ": " + v.reason + w);
      } else if (!v.is_true()) {
        r.notes.push_back("field " + f.name + ": " + v.reason);
      }
      for (auto& n : v.notes) r.notes.push_back("field " + f.name + ": " + n);
    } catch (const Error& e) {
      fail("field " + f.name + ": " + std::string(to_string(e.code())) + ": " + e.what());
    }
  }
  return r;
}

}  // namespace dtrap
