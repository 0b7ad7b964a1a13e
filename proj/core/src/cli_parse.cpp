#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "toposfactor/cli.hpp"

namespace toposfactor {

std::string_view to_string(DefKind k) {
  switch (k) {
    case DefKind::Category: return "category";
    case DefKind::Functor: return "functor";
    case DefKind::Nat: return "nat";
    case DefKind::Presheaf: return "presheaf";
    case DefKind::Topology: return "topology";
    case DefKind::Diagram: return "diagram";
  }
  return "?";
}

// --- workspace ---------------------------------------------------------------------------

namespace {

template <class Map>
const typename Map::mapped_type& lookup(const Map& m, DefKind kind, const std::string& name) {
  auto it = m.find(name);
  if (it == m.end()) {
    throw Error(ErrorCode::UnresolvedName,
                "no " + std::string(to_string(kind)) + " named '" + name + "'");
  }
  return it->second;
}

}  // namespace

CategoryRef Workspace::category(const std::string& name) const {
  if (auto it = categories_.find(name); it != categories_.end()) return it->second;
  for (const auto& [fixture_name, c] : fixtures::catalog()) {
    if (fixture_name == name) return c;
  }
  throw Error(ErrorCode::UnresolvedName, "no category named '" + name + "'");
}

const FinFunctor& Workspace::functor(const std::string& name) const {
  return lookup(functors_, DefKind::Functor, name);
}
const NatTransf& Workspace::nat(const std::string& name) const {
  return lookup(nats_, DefKind::Nat, name);
}
const FinPresheaf& Workspace::presheaf(const std::string& name) const {
  return lookup(presheaves_, DefKind::Presheaf, name);
}
const GrothendieckTopology& Workspace::topology(const std::string& name) const {
  return lookup(topologies_, DefKind::Topology, name);
}
const DiagramDef& Workspace::diagram(const std::string& name) const {
  return lookup(diagrams_, DefKind::Diagram, name);
}

bool Workspace::has(DefKind kind, const std::string& name) const {
  return provenance_.count({kind, name}) > 0;
}

std::string Workspace::only(DefKind kind) const {
  std::vector<std::string> found;
  for (const auto& [k, name] : order_) {
    if (k == kind) found.push_back(name);
  }
  if (found.size() != 1) {
    throw Error(ErrorCode::UnresolvedName,
                "expected a " + std::string(to_string(kind)) + " name (workspace defines " +
                    std::to_string(found.size()) + ")");
  }
  return found.front();
}

const Provenance& Workspace::provenance(DefKind kind, const std::string& name) const {
  auto it = provenance_.find({kind, name});
  if (it == provenance_.end()) {
    throw Error(ErrorCode::UnresolvedName,
                "no " + std::string(to_string(kind)) + " named '" + name + "'");
  }
  return it->second;
}

void Workspace::record(DefKind kind, const std::string& name, Provenance p) {
  if (has(kind, name)) {
    const auto& prev = provenance_.at({kind, name});
    throw Error(ErrorCode::DuplicateName, std::string(to_string(kind)) + " '" + name +
                                              "' already defined at " + prev.file + ":" +
                                              std::to_string(prev.line));
  }
  provenance_.emplace(std::pair{kind, name}, std::move(p));
  order_.emplace_back(kind, name);
}

void Workspace::add(const std::string& name, CategoryRef c, Provenance p) {
  record(DefKind::Category, name, std::move(p));
  categories_.emplace(name, std::move(c));
}
void Workspace::add(const std::string& name, FinFunctor f, Provenance p) {
  record(DefKind::Functor, name, std::move(p));
  functors_.emplace(name, std::move(f));
}
void Workspace::add(const std::string& name, NatTransf n, Provenance p) {
  record(DefKind::Nat, name, std::move(p));
  nats_.emplace(name, std::move(n));
}
void Workspace::add(const std::string& name, FinPresheaf x, Provenance p) {
  record(DefKind::Presheaf, name, std::move(p));
  presheaves_.emplace(name, std::move(x));
}
void Workspace::add(const std::string& name, GrothendieckTopology j, Provenance p) {
  record(DefKind::Topology, name, std::move(p));
  topologies_.emplace(name, std::move(j));
}
void Workspace::add(const std::string& name, DiagramDef d, Provenance p) {
  record(DefKind::Diagram, name, std::move(p));
  diagrams_.emplace(name, std::move(d));
}

// --- lexer -------------------------------------------------------------------------------

namespace {

enum class Tok { Name, Arrow, MapsTo, DoubleArrow, LBrace, RBrace, LBracket, RBracket, Colon,
                 Comma, Semicolon, Dot, Equals, End };

std::string describe(Tok t) {
  switch (t) {
    case Tok::Name: return "name";
    case Tok::Arrow: return "'->'";
    case Tok::MapsTo: return "'|->'";
    case Tok::DoubleArrow: return "'=>'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::Semicolon: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::Equals: return "'='";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
  bool quoted = false;
};

bool is_name_char(unsigned char ch) {
  return std::isalnum(ch) || ch == '_' || ch == '\'' || ch == '#' || ch == '^' || ch == '+' ||
         ch == '*' || ch == '@' || ch == '!' || ch == '?' || ch == '$' || ch == '~';
}

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& file) : text_(text), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      const std::size_t line = line_, col = col_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      const char ch = text_[pos_];
      auto single = [&](Tok t) {
        advance(1);
        out.push_back({t, std::string(1, ch), line, col});
      };
      if (starts_with("|->")) {
        advance(3);
        out.push_back({Tok::MapsTo, "|->", line, col});
      } else if (starts_with("->")) {
        advance(2);
        out.push_back({Tok::Arrow, "->", line, col});
      } else if (starts_with("=>")) {
        advance(2);
        out.push_back({Tok::DoubleArrow, "=>", line, col});
      } else if (ch == '{') {
        single(Tok::LBrace);
      } else if (ch == '}') {
        single(Tok::RBrace);
      } else if (ch == '[') {
        single(Tok::LBracket);
      } else if (ch == ']') {
        single(Tok::RBracket);
      } else if (ch == ':') {
        single(Tok::Colon);
      } else if (ch == ',') {
        single(Tok::Comma);
      } else if (ch == ';') {
        single(Tok::Semicolon);
      } else if (ch == '.') {
        single(Tok::Dot);
      } else if (ch == '=') {
        single(Tok::Equals);
      } else if (ch == '"') {
        out.push_back(quoted(line, col));
      } else if (is_name_char(static_cast<unsigned char>(ch))) {
        std::size_t end = pos_;
        while (end < text_.size() && is_name_char(static_cast<unsigned char>(text_[end]))) ++end;
        std::string word(text_.substr(pos_, end - pos_));
        advance(end - pos_);
        out.push_back({Tok::Name, std::move(word), line, col});
      } else {
        throw Error(ErrorCode::SyntaxError, file_ + ":" + std::to_string(line) + ":" +
                                                std::to_string(col) + ": unexpected character '" +
                                                std::string(1, ch) + "'");
      }
    }
  }

 private:
  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance(1);
      } else if (starts_with("//")) {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }

  Token quoted(std::size_t line, std::size_t col) {
    advance(1);
    std::string value;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\n') break;
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) advance(1);
      value.push_back(text_[pos_]);
      advance(1);
    }
    if (pos_ >= text_.size() || text_[pos_] != '"') {
      throw Error(ErrorCode::SyntaxError, file_ + ":" + std::to_string(line) + ":" +
                                              std::to_string(col) + ": unterminated string");
    }
    advance(1);
    return {Tok::Name, std::move(value), line, col, true};
  }

  std::string_view text_;
  const std::string& file_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// --- parser ------------------------------------------------------------------------------

class Parser {
 public:
  Parser(Workspace& ws, std::vector<Token> tokens, const std::string& file)
      : ws_(ws), toks_(std::move(tokens)), file_(file) {}

  void run() {
    while (peek().kind != Tok::End) {
      const Token& head = peek();
      if (head.kind == Tok::Name && !head.quoted) {
        if (head.text == "category") { category(); continue; }
        if (head.text == "functor") { functor(); continue; }
        if (head.text == "nat") { nat(); continue; }
        if (head.text == "presheaf") { presheaf(); continue; }
        if (head.text == "topology") { topology(); continue; }
        if (head.text == "diagram") { diagram(); continue; }
      }
      fail_expected(head, {"'category'", "'functor'", "'nat'", "'presheaf'", "'topology'",
                           "'diagram'"});
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  std::string where(const Token& t) const {
    return file_ + ":" + std::to_string(t.line) + ":" + std::to_string(t.column);
  }

  [[noreturn]] void fail_expected(const Token& t, const std::vector<std::string>& expected) const {
    std::string list;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) list += ", ";
      list += expected[i];
    }
    const std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorCode::SyntaxError,
                where(t) + ": expected " + (expected.size() > 1 ? "one of " : "") + list +
                    ", got " + got);
  }

  [[noreturn]] void fail(ErrorCode code, const Token& t, const std::string& what) const {
    throw Error(code, where(t) + ": " + what);
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) fail_expected(peek(), {describe(kind)});
    return next();
  }
  void expect_keyword(const char* word) {
    if (peek().kind != Tok::Name || peek().quoted || peek().text != word) {
      fail_expected(peek(), {std::string("'") + word + "'"});
    }
    next();
  }
  bool at_keyword(const char* word, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Name && !t.quoted && t.text == word;
  }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    next();
    return true;
  }
  void separators() {
    while (peek().kind == Tok::Semicolon || peek().kind == Tok::Comma) next();
  }

  std::vector<const Token*> name_list(Tok close) {
    std::vector<const Token*> out;
    if (peek().kind == close) return out;
    out.push_back(&expect(Tok::Name));
    while (accept(Tok::Comma)) out.push_back(&expect(Tok::Name));
    return out;
  }

  // Runs `build`, prefixing library errors with the block position.
  template <class F>
  auto located(const Token& at, F&& build) {
    try {
      return build();
    } catch (const Error& e) {
      const std::string msg = e.what();
      const std::string body = msg.substr(msg.find(": ") + 2);
      if (body.rfind(file_ + ":", 0) == 0) throw;
      throw Error(e.code(), where(at) + ": " + body);
    }
  }

  CategoryRef resolve_category(const Token& t) {
    try {
      return ws_.category(t.text);
    } catch (const Error&) {
      fail(ErrorCode::UnresolvedName, t, "unknown category '" + t.text + "'");
    }
  }

  Provenance here(const Token& t) const { return {file_, t.line}; }

  // category NAME { objects: a, b ; f : a -> b ; compose: g . f = h }
  void category() {
    const Token& kw = next();
    const Token& name = expect(Tok::Name);
    expect(Tok::LBrace);
    CategoryDescription desc;
    desc.name = name.text;
    std::vector<const Token*> mor_tokens;
    while (!accept(Tok::RBrace)) {
      if (at_keyword("objects") && peek(1).kind == Tok::Colon) {
        next();
        next();
        for (const Token* t : name_list(Tok::RBrace)) desc.objects.push_back(t->text);
      } else if (at_keyword("compose") && peek(1).kind == Tok::Colon) {
        next();
        next();
        CompositionDecl c;
        c.second = expect(Tok::Name).text;
        expect(Tok::Dot);
        c.first = expect(Tok::Name).text;
        expect(Tok::Equals);
        c.result = expect(Tok::Name).text;
        desc.compositions.push_back(std::move(c));
      } else if (peek().kind == Tok::Name) {
        std::vector<const Token*> names{&next()};
        while (accept(Tok::Comma)) names.push_back(&expect(Tok::Name));
        expect(Tok::Colon);
        const std::string src = expect(Tok::Name).text;
        expect(Tok::Arrow);
        const std::string tgt = expect(Tok::Name).text;
        for (const Token* t : names) {
          desc.morphisms.push_back({t->text, src, tgt});
          mor_tokens.push_back(t);
        }
      } else {
        fail_expected(peek(), {"'objects'", "'compose'", "morphism name", "'}'"});
      }
      separators();
    }
    (void)kw;
    auto c = located(name, [&] { return share(validate_category(desc)); });
    located(name, [&] {
      ws_.add(name.text, c, here(name));
      return 0;
    });
  }

  std::vector<std::pair<const Token*, const Token*>> mappings(
      const std::function<bool()>& other_entry = {}) {
    std::vector<std::pair<const Token*, const Token*>> out;
    while (!accept(Tok::RBrace)) {
      if (other_entry && other_entry()) {
        separators();
        continue;
      }
      if (peek().kind != Tok::Name) fail_expected(peek(), {"name", "'}'"});
      const Token* from = &next();
      expect(Tok::MapsTo);
      const Token* to = &expect(Tok::Name);
      out.emplace_back(from, to);
      separators();
    }
    return out;
  }

  FunctorDescription functor_description(
      const std::string& name, const CategoryRef& c,
      const std::vector<std::pair<const Token*, const Token*>>& maps) {
    FunctorDescription desc;
    desc.name = name;
    for (auto [from, to] : maps) {
      const bool object = c->find_object(from->text).has_value();
      if (!object && !c->find_morphism(from->text)) {
        fail(ErrorCode::UnresolvedName, *from,
             "'" + from->text + "' is neither an object nor a morphism of " + c->name());
      }
      auto& target = object ? desc.on_objects : desc.on_morphisms;
      if (!target.emplace(from->text, to->text).second) {
        fail(ErrorCode::DuplicateName, *from, "'" + from->text + "' mapped twice");
      }
    }
    return desc;
  }

  // functor NAME : C -> D { x |-> y }
  void functor() {
    next();
    const Token& name = expect(Tok::Name);
    expect(Tok::Colon);
    const Token& ct = expect(Tok::Name);
    expect(Tok::Arrow);
    const Token& dt = expect(Tok::Name);
    expect(Tok::LBrace);
    auto c = resolve_category(ct);
    auto d = resolve_category(dt);
    auto desc = functor_description(name.text, c, mappings());
    auto f = located(name, [&] { return validate_functor(desc, c, d); });
    located(name, [&] {
      ws_.add(name.text, std::move(f), here(name));
      return 0;
    });
  }

  // nat NAME : F => G { c |-> m }
  void nat() {
    next();
    const Token& name = expect(Tok::Name);
    expect(Tok::Colon);
    const Token& ft = expect(Tok::Name);
    expect(Tok::DoubleArrow);
    const Token& gt = expect(Tok::Name);
    expect(Tok::LBrace);
    const FinFunctor* f = nullptr;
    const FinFunctor* g = nullptr;
    try {
      f = &ws_.functor(ft.text);
    } catch (const Error&) {
      fail(ErrorCode::UnresolvedName, ft, "unknown functor '" + ft.text + "'");
    }
    try {
      g = &ws_.functor(gt.text);
    } catch (const Error&) {
      fail(ErrorCode::UnresolvedName, gt, "unknown functor '" + gt.text + "'");
    }
    const auto& c = *f->domain();
    const auto& d = *f->codomain();
    if (!(c == *g->domain()) || !(d == *g->codomain())) {
      fail(ErrorCode::PreconditionViolated, name, "functors are not parallel");
    }
    std::vector<MorId> comps(c.num_objects(), npos);
    for (auto [from, to] : mappings()) {
      auto obj = c.find_object(from->text);
      if (!obj) fail(ErrorCode::UnresolvedName, *from, "no object '" + from->text + "'");
      auto mor = d.find_morphism(to->text);
      if (!mor) fail(ErrorCode::UnresolvedName, *to, "no morphism '" + to->text + "'");
      comps[*obj] = *mor;
    }
    for (ObjId a = 0; a < c.num_objects(); ++a) {
      if (comps[a] != npos) continue;
      const auto& h = d.hom(f->on_object(a), g->on_object(a));
      if (h.size() != 1) {
        fail(ErrorCode::UnmappedMorphism, name, "no component at '" + c.object_name(a) + "'");
      }
      comps[a] = h.front();
    }
    auto n = located(name, [&] { return NatTransf::make(*f, *g, comps, name.text); });
    located(name, [&] {
      ws_.add(name.text, std::move(n), here(name));
      return 0;
    });
  }

  // presheaf NAME on C { c = {x, y} ; g : x |-> y, ... }
  void presheaf() {
    next();
    const Token& name = expect(Tok::Name);
    expect_keyword("on");
    const Token& ct = expect(Tok::Name);
    expect(Tok::LBrace);
    auto base = resolve_category(ct);
    const auto& c = *base;
    std::vector<std::vector<std::string>> elements(c.num_objects());
    std::vector<bool> declared(c.num_objects(), false);
    std::vector<std::vector<std::pair<const Token*, const Token*>>> given(c.num_morphisms());
    std::vector<const Token*> given_at(c.num_morphisms(), nullptr);
    while (!accept(Tok::RBrace)) {
      if (peek().kind != Tok::Name) fail_expected(peek(), {"object name", "morphism name", "'}'"});
      const Token& head = next();
      if (accept(Tok::Equals)) {
        auto obj = c.find_object(head.text);
        if (!obj) fail(ErrorCode::UnresolvedName, head, "no object '" + head.text + "'");
        if (declared[*obj]) fail(ErrorCode::DuplicateName, head, "elements of '" + head.text +
                                                                     "' given twice");
        declared[*obj] = true;
        expect(Tok::LBrace);
        std::set<std::string> seen;
        for (const Token* t : name_list(Tok::RBrace)) {
          if (!seen.insert(t->text).second) {
            fail(ErrorCode::DuplicateName, *t, "element '" + t->text + "' repeated");
          }
          elements[*obj].push_back(t->text);
        }
        expect(Tok::RBrace);
      } else if (peek().kind == Tok::Colon) {
        next();
        auto mor = c.find_morphism(head.text);
        if (!mor) fail(ErrorCode::UnresolvedName, head, "no morphism '" + head.text + "'");
        given_at[*mor] = &head;
        while (true) {
          const Token* from = &expect(Tok::Name);
          expect(Tok::MapsTo);
          const Token* to = &expect(Tok::Name);
          given[*mor].emplace_back(from, to);
          if (peek().kind != Tok::Comma || peek(1).kind != Tok::Name ||
              peek(2).kind != Tok::MapsTo) {
            break;
          }
          next();
        }
      } else {
        fail_expected(peek(), {"'='", "':'"});
      }
      separators();
    }

    const std::size_t unknown = npos;
    std::vector<std::vector<std::size_t>> actions(c.num_morphisms());
    std::vector<bool> known(c.num_morphisms(), false);
    for (MorId g = 0; g < c.num_morphisms(); ++g) {
      const ObjId src = c.source(g), tgt = c.target(g);
      actions[g].assign(elements[tgt].size(), unknown);
      if (c.is_identity(g)) {
        for (std::size_t x = 0; x < elements[tgt].size(); ++x) actions[g][x] = x;
        known[g] = true;
        continue;
      }
      for (auto [from, to] : given[g]) {
        auto fx = std::find(elements[tgt].begin(), elements[tgt].end(), from->text);
        if (fx == elements[tgt].end()) {
          fail(ErrorCode::UnresolvedName, *from,
               "'" + from->text + "' is not an element over '" + c.object_name(tgt) + "'");
        }
        auto tx = std::find(elements[src].begin(), elements[src].end(), to->text);
        if (tx == elements[src].end()) {
          fail(ErrorCode::UnresolvedName, *to,
               "'" + to->text + "' is not an element over '" + c.object_name(src) + "'");
        }
        actions[g][fx - elements[tgt].begin()] = tx - elements[src].begin();
      }
      if (given_at[g] != nullptr) {
        if (std::find(actions[g].begin(), actions[g].end(), unknown) != actions[g].end()) {
          fail(ErrorCode::UnmappedMorphism, *given_at[g],
               "action of '" + c.morphism_name(g) + "' is not total");
        }
        known[g] = true;
      } else if (elements[src].size() == 1 || elements[tgt].empty()) {
        std::fill(actions[g].begin(), actions[g].end(), 0);
        known[g] = true;
      }
    }
    // Infer remaining actions from composites: X(a . b) = X(b) . X(a).
    for (bool progress = true; progress;) {
      progress = false;
      for (MorId g = 0; g < c.num_morphisms(); ++g) {
        if (known[g]) continue;
        for (MorId b : c.arrows_out_of(c.source(g))) {
          if (known[g]) break;
          if (!known[b] || c.is_identity(b)) continue;
          for (MorId a : c.hom(c.target(b), c.target(g))) {
            if (!known[a] || c.is_identity(a) || c.compose(a, b) != g) continue;
            for (std::size_t x = 0; x < actions[g].size(); ++x) {
              actions[g][x] = actions[b][actions[a][x]];
            }
            known[g] = progress = true;
            break;
          }
        }
      }
    }
    for (MorId g = 0; g < c.num_morphisms(); ++g) {
      if (!known[g]) {
        fail(ErrorCode::UnmappedMorphism, name,
             "no action given for '" + c.morphism_name(g) + "'");
      }
    }
    auto x = located(name, [&] {
      return FinPresheaf::make(base, elements, actions, name.text);
    });
    located(name, [&] {
      ws_.add(name.text, std::move(x), here(name));
      return 0;
    });
  }

  // topology NAME on C { cover c = [f, g] }
  void topology() {
    next();
    const Token& name = expect(Tok::Name);
    expect_keyword("on");
    const Token& ct = expect(Tok::Name);
    expect(Tok::LBrace);
    auto base = resolve_category(ct);
    CoverageBasis basis(base->num_objects());
    while (!accept(Tok::RBrace)) {
      expect_keyword("cover");
      const Token& obj = expect(Tok::Name);
      auto c = base->find_object(obj.text);
      if (!c) fail(ErrorCode::UnresolvedName, obj, "no object '" + obj.text + "'");
      expect(Tok::Equals);
      expect(Tok::LBracket);
      std::vector<MorId> family;
      for (const Token* t : name_list(Tok::RBracket)) {
        auto m = base->find_morphism(t->text);
        if (!m) fail(ErrorCode::UnresolvedName, *t, "no morphism '" + t->text + "'");
        if (base->target(*m) != *c) {
          fail(ErrorCode::NotASieve, *t, "'" + t->text + "' does not end at '" + obj.text + "'");
        }
        family.push_back(*m);
      }
      expect(Tok::RBracket);
      basis[*c].push_back(std::move(family));
      separators();
    }
    auto j = located(name, [&] { return saturate(base, basis); });
    located(name, [&] {
      ws_.add(name.text, std::move(j), here(name));
      return 0;
    });
  }

  // diagram NAME : I -> C { i |-> c ; d |-> m ; slice i = [h, ...] }
  void diagram() {
    next();
    const Token& name = expect(Tok::Name);
    expect(Tok::Colon);
    const Token& it = expect(Tok::Name);
    expect(Tok::Arrow);
    const Token& ct = expect(Tok::Name);
    expect(Tok::LBrace);
    auto index = resolve_category(it);
    auto target = resolve_category(ct);
    std::vector<std::pair<const Token*, std::vector<const Token*>>> slice_lines;
    auto maps = mappings([&] {
      if (!(at_keyword("slice") && peek(1).kind == Tok::Name && peek(2).kind == Tok::Equals)) {
        return false;
      }
      next();
      const Token* obj = &next();
      next();
      expect(Tok::LBracket);
      auto members = name_list(Tok::RBracket);
      expect(Tok::RBracket);
      slice_lines.emplace_back(obj, std::move(members));
      return true;
    });
    auto desc = functor_description(name.text, index, maps);
    auto f = located(name, [&] { return validate_functor(desc, index, target); });
    auto diag = located(name, [&] { return CofilteredDiagram::make(f, name.text); });
    SliceSystem slices = full_slice_system(diag);
    std::vector<bool> seen(index->num_objects(), false);
    for (const auto& [obj, members] : slice_lines) {
      auto i = index->find_object(obj->text);
      if (!i) fail(ErrorCode::UnresolvedName, *obj, "no index object '" + obj->text + "'");
      if (seen[*i]) fail(ErrorCode::DuplicateName, *obj, "slice '" + obj->text + "' given twice");
      seen[*i] = true;
      std::vector<MorId> ids;
      for (const Token* t : members) {
        auto m = target->find_morphism(t->text);
        if (!m) fail(ErrorCode::UnresolvedName, *t, "no morphism '" + t->text + "'");
        ids.push_back(*m);
      }
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      slices.members[*i] = std::move(ids);
    }
    located(name, [&] {
      ws_.add(name.text, DiagramDef{std::move(diag), std::move(slices)}, here(name));
      return 0;
    });
  }

  Workspace& ws_;
  std::vector<Token> toks_;
  const std::string& file_;
  std::size_t pos_ = 0;
};

}  // namespace

void parse_into(Workspace& ws, std::string_view text, const std::string& file) {
  Parser(ws, Lexer(text, file).run(), file).run();
}

Workspace parse_workspace(std::string_view text, const std::string& file) {
  Workspace ws;
  parse_into(ws, text, file);
  return ws;
}

Workspace load_workspace(const std::vector<std::string>& paths) {
  Workspace ws;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::PreconditionViolated, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    parse_into(ws, buf.str(), path);
  }
  return ws;
}

}  // namespace toposfactor
