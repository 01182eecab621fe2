#include "nomre/nre.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace nomre {

// ------------------------------------------------------------------ AST

Nre Nre::make(Node n) { return Nre(std::make_shared<const Node>(std::move(n))); }

Nre Nre::one() { return make({Kind::One, {}, {}, {}, nullptr, nullptr}); }
Nre Nre::zero() { return make({Kind::Zero, {}, {}, {}, nullptr, nullptr}); }

Nre Nre::letter(std::string sym) {
  return make({Kind::Letter, std::move(sym), {}, {}, nullptr, nullptr});
}

Nre Nre::name(Name n) { return make({Kind::Name, {}, n, n, nullptr, nullptr}); }
Nre Nre::under(Name n) {
  return make({Kind::Under, {}, n, n, nullptr, nullptr});
}

Nre Nre::sum(Nre l, Nre r) {
  return make({Kind::Sum, {}, {}, {}, std::make_shared<const Nre>(std::move(l)),
               std::make_shared<const Nre>(std::move(r))});
}

Nre Nre::concat(Nre l, Nre r) {
  return make({Kind::Concat, {}, {}, {},
               std::make_shared<const Nre>(std::move(l)),
               std::make_shared<const Nre>(std::move(r))});
}

Nre Nre::star(Nre e) {
  return make({Kind::Star, {}, {}, {},
               std::make_shared<const Nre>(std::move(e)), nullptr});
}

Nre Nre::binder(Name bind, Nre body) { return binder(bind, std::move(body), bind); }

Nre Nre::binder(Name bind, Nre body, Name close) {
  return make({Kind::Binder, {}, bind, close,
               std::make_shared<const Nre>(std::move(body)), nullptr});
}

Nre Nre::at(int line, int col) const {
  Node n = *node_;
  n.line = line;
  n.col = col;
  return make(std::move(n));
}

std::size_t Nre::size() const {
  switch (kind()) {
  case Kind::Sum:
  case Kind::Concat:
    return 1 + left().size() + right().size();
  case Kind::Star:
  case Kind::Binder:
    return 1 + body().size();
  default:
    return 1;
  }
}

bool operator==(const Nre &a, const Nre &b) {
  if (a.node_ == b.node_)
    return true;
  if (a.kind() != b.kind())
    return false;
  using K = Nre::Kind;
  switch (a.kind()) {
  case K::One:
  case K::Zero:
    return true;
  case K::Letter:
    return a.sym() == b.sym();
  case K::Name:
  case K::Under:
    return a.atom() == b.atom();
  case K::Sum:
  case K::Concat:
    return a.left() == b.left() && a.right() == b.right();
  case K::Star:
    return a.body() == b.body();
  case K::Binder:
    return a.atom() == b.atom() && a.close() == b.close() &&
           a.body() == b.body();
  }
  return false;
}

// -------------------------------------------------------------- classes

const char *class_name(NreClass c) {
  switch (c) {
  case NreClass::B:
    return "b-NRE";
  case NreClass::P:
    return "p-NRE";
  case NreClass::U:
    return "u-NRE";
  case NreClass::UP:
    return "up-NRE";
  }
  return "?";
}

namespace {
bool has_p(NreClass c) { return c == NreClass::P || c == NreClass::UP; }
bool has_u(NreClass c) { return c == NreClass::U || c == NreClass::UP; }
NreClass from_flags(bool p, bool u) {
  if (p && u)
    return NreClass::UP;
  if (p)
    return NreClass::P;
  if (u)
    return NreClass::U;
  return NreClass::B;
}
} // namespace

NreClass class_join(NreClass a, NreClass b) {
  return from_flags(has_p(a) || has_p(b), has_u(a) || has_u(b));
}

bool class_leq(NreClass a, NreClass b) { return class_join(a, b) == b; }

// --------------------------------------------------------------- parser

ParseError::ParseError(const std::string &msg, int line, int col)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                         ": " + msg),
      line_(line), col_(col) {}

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
}

class Parser {
public:
  Parser(std::string_view text, const Alphabet &alphabet, ParseOptions opts)
      : s_(text), alpha_(alphabet), opts_(opts) {}

  Nre run() {
    skip_ws();
    if (eof())
      fail("empty expression");
    Nre e = sum();
    skip_ws();
    if (!eof())
      fail(std::string("unexpected '") + peek() + "'");
    return e;
  }

private:
  std::string_view s_;
  const Alphabet &alpha_;
  ParseOptions opts_;
  std::size_t pos_ = 0;
  std::vector<Name> env_;

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }

  std::pair<int, int> where(std::size_t p) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < p && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  [[noreturn]] void fail(const std::string &msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t p, const std::string &msg) const {
    auto [l, c] = where(p);
    throw ParseError(msg, l, c);
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek())))
      ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Nre located(Nre e, std::size_t p) const {
    auto [l, c] = where(p);
    return e.at(l, c);
  }

  bool starts_atom() {
    skip_ws();
    char c = peek();
    return c == '(' || c == '<' || c == '$' || c == '_' || c == '0' ||
           c == '1' || std::isalpha(static_cast<unsigned char>(c));
  }

  Nre sum() {
    Nre e = concat();
    for (;;) {
      skip_ws();
      if (peek() != '+')
        return e;
      std::size_t p = pos_++;
      e = located(Nre::sum(e, concat()), p);
    }
  }

  Nre concat() {
    if (!starts_atom())
      fail(eof() ? "unexpected end of input" : "expected an expression");
    std::size_t p = pos_;
    Nre e = postfix();
    while (starts_atom())
      e = located(Nre::concat(e, postfix()), p);
    return e;
  }

  Nre postfix() {
    std::vector<Nre> parts = atom();
    for (;;) {
      skip_ws();
      if (peek() != '*')
        break;
      ++pos_;
      parts.back() = Nre::star(parts.back()).at(parts.back().line(),
                                                parts.back().col());
    }
    Nre e = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i)
      e = Nre::concat(e, parts[i]).at(parts[0].line(), parts[0].col());
    return e;
  }

  Name name_token() {
    if (peek() != '$')
      fail("expected '$'");
    ++pos_;
    std::size_t start = pos_;
    while (!eof() && is_name_char(peek()))
      ++pos_;
    if (pos_ == start)
      fail("empty name after '$'");
    return Name::user(s_.substr(start, pos_ - start));
  }

  bool bound(const Name &n) const {
    return std::find(env_.begin(), env_.end(), n) != env_.end();
  }

  // A run of letters may denote several concatenated letters, so atoms
  // come back as a list of factors; postfix '*' applies to the last one.
  std::vector<Nre> atom() {
    skip_ws();
    std::size_t p = pos_;
    char c = peek();
    if (c == '(') {
      ++pos_;
      skip_ws();
      Nre e = sum();
      expect(')');
      return {e};
    }
    if (c == '1' || c == '0') {
      ++pos_;
      if (!eof() && is_name_char(peek()))
        fail_at(p, "constants 0 and 1 must stand alone");
      return {located(c == '1' ? Nre::one() : Nre::zero(), p)};
    }
    if (c == '$')
      return {located(Nre::name(name_token()), p)};
    if (c == '_') {
      ++pos_;
      if (peek() != '$')
        fail("expected '$' after '_'");
      return {located(Nre::under(name_token()), p)};
    }
    if (c == '<') {
      ++pos_;
      skip_ws();
      Name n = name_token();
      expect('.');
      env_.push_back(n);
      skip_ws();
      Nre body = sum();
      env_.pop_back();
      expect('>');
      Name close = n;
      if (peek() == '$') {
        std::size_t cp = pos_;
        close = name_token();
        if (close != n && !bound(close) && !opts_.allow_unbound_close)
          fail_at(cp, "unbound close name " + close.str());
      }
      return {located(Nre::binder(n, body, close), p)};
    }
    if (std::isalpha(static_cast<unsigned char>(c)))
      return letters();
    fail(std::string("unexpected '") + c + "'");
  }

  std::vector<Nre> letters() {
    std::size_t start = pos_;
    while (!eof() && is_name_char(peek()) && peek() != '\'')
      ++pos_;
    std::string_view run = s_.substr(start, pos_ - start);
    std::vector<Nre> out;
    std::size_t i = 0;
    while (i < run.size()) {
      std::size_t best = 0;
      for (const auto &l : alpha_)
        if (l.size() > best && run.substr(i, l.size()) == l)
          best = l.size();
      if (best == 0)
        fail_at(start + i, "letter not in alphabet: '" +
                               std::string(run.substr(i)) + "'");
      out.push_back(located(Nre::letter(std::string(run.substr(i, best))),
                            start + i));
      i += best;
    }
    return out;
  }
};

} // namespace

Nre parse(std::string_view text, const Alphabet &alphabet, ParseOptions opts) {
  return Parser(text, alphabet, opts).run();
}

// --------------------------------------------------------------- render

namespace {

void render_to(const Nre &e, int ctx, std::string &out) {
  using K = Nre::Kind;
  switch (e.kind()) {
  case K::One:
    out += '1';
    return;
  case K::Zero:
    out += '0';
    return;
  case K::Letter:
    out += e.sym();
    return;
  case K::Name:
    out += e.atom().str();
    return;
  case K::Under:
    out += '_' + e.atom().str();
    return;
  case K::Sum:
    if (ctx > 0)
      out += '(';
    render_to(e.left(), 0, out);
    out += " + ";
    render_to(e.right(), 1, out);
    if (ctx > 0)
      out += ')';
    return;
  case K::Concat:
    if (ctx > 1)
      out += '(';
    render_to(e.left(), 1, out);
    out += ' ';
    render_to(e.right(), 2, out);
    if (ctx > 1)
      out += ')';
    return;
  case K::Star:
    render_to(e.body(), 2, out);
    out += '*';
    return;
  case K::Binder:
    out += '<' + e.atom().str() + '.';
    render_to(e.body(), 0, out);
    out += '>';
    if (!e.plain_binder())
      out += e.close().str();
    return;
  }
}

} // namespace

std::string render(const Nre &e) {
  std::string out;
  render_to(e, 0, out);
  return out;
}

// ------------------------------------------------------------- analyses

NreClass classify(const Nre &e) {
  bool p = false, u = false;
  std::function<void(const Nre &)> go = [&](const Nre &x) {
    using K = Nre::Kind;
    switch (x.kind()) {
    case K::Under:
      u = true;
      break;
    case K::Sum:
    case K::Concat:
      go(x.left());
      go(x.right());
      break;
    case K::Star:
      go(x.body());
      break;
    case K::Binder:
      if (!x.plain_binder())
        p = true;
      go(x.body());
      break;
    default:
      break;
    }
  };
  go(e);
  return from_flags(p, u);
}

std::string WellformedReport::str() const {
  std::ostringstream os;
  for (const auto &d : diagnostics)
    os << d.message << '\n';
  return os.str();
}

WellformedReport check_wellformed(const Nre &e, bool require_closed) {
  WellformedReport rep;
  std::vector<Name> env;
  auto in_scope = [&](const Name &n) {
    return std::find(env.begin(), env.end(), n) != env.end();
  };
  auto tag = [](const Nre &x) {
    if (x.line() == 0)
      return std::string();
    return std::to_string(x.line()) + ":" + std::to_string(x.col()) + ": ";
  };
  std::function<void(const Nre &)> go = [&](const Nre &x) {
    using K = Nre::Kind;
    switch (x.kind()) {
    case K::Name:
      if (require_closed && !in_scope(x.atom()))
        rep.diagnostics.push_back(
            {Diagnostic::Kind::Open,
             tag(x) + "free name " + x.atom().str() +
                 " in an expression that must be closed",
             x});
      break;
    case K::Under:
      if (!in_scope(x.atom()))
        rep.diagnostics.push_back(
            {Diagnostic::Kind::UnderlineLocality,
             tag(x) + "underline locality violated: " + render(x) +
                 " is not inside a binder of " + x.atom().str(),
             x});
      break;
    case K::Sum:
    case K::Concat:
      go(x.left());
      go(x.right());
      break;
    case K::Star:
      go(x.body());
      break;
    case K::Binder:
      if (!x.plain_binder() && !in_scope(x.close()))
        rep.diagnostics.push_back(
            {Diagnostic::Kind::Scope,
             tag(x) + "scope condition violated: " + render(x) + " closes " +
                 x.close().str() + " outside any binder of " +
                 x.close().str(),
             x});
      env.push_back(x.atom());
      go(x.body());
      env.pop_back();
      break;
    default:
      break;
    }
  };
  go(e);
  return rep;
}

NameSet free_names(const Nre &e) {
  NameSet out;
  std::vector<Name> env;
  auto use = [&](const Name &n) {
    if (std::find(env.begin(), env.end(), n) == env.end())
      out.insert(n);
  };
  std::function<void(const Nre &)> go = [&](const Nre &x) {
    using K = Nre::Kind;
    switch (x.kind()) {
    case K::Name:
    case K::Under:
      use(x.atom());
      break;
    case K::Sum:
    case K::Concat:
      go(x.left());
      go(x.right());
      break;
    case K::Star:
      go(x.body());
      break;
    case K::Binder:
      if (!x.plain_binder())
        use(x.close());
      env.push_back(x.atom());
      go(x.body());
      env.pop_back();
      break;
    default:
      break;
    }
  };
  go(e);
  return out;
}

NameSet all_names(const Nre &e) {
  NameSet out;
  std::function<void(const Nre &)> go = [&](const Nre &x) {
    using K = Nre::Kind;
    switch (x.kind()) {
    case K::Name:
    case K::Under:
      out.insert(x.atom());
      break;
    case K::Sum:
    case K::Concat:
      go(x.left());
      go(x.right());
      break;
    case K::Star:
      go(x.body());
      break;
    case K::Binder:
      out.insert(x.atom());
      out.insert(x.close());
      go(x.body());
      break;
    default:
      break;
    }
  };
  go(e);
  return out;
}

Nre apply_perm_expr(const Perm &p, const Nre &e) {
  if (p.is_identity())
    return e;
  using K = Nre::Kind;
  switch (e.kind()) {
  case K::Name:
    return Nre::name(p(e.atom()));
  case K::Under:
    return Nre::under(p(e.atom()));
  case K::Sum:
    return Nre::sum(apply_perm_expr(p, e.left()), apply_perm_expr(p, e.right()));
  case K::Concat:
    return Nre::concat(apply_perm_expr(p, e.left()),
                       apply_perm_expr(p, e.right()));
  case K::Star:
    return Nre::star(apply_perm_expr(p, e.body()));
  case K::Binder:
    return Nre::binder(p(e.atom()), apply_perm_expr(p, e.body()), p(e.close()));
  default:
    return e;
  }
}

namespace {

// de Bruijn level lookup: distance from the innermost binder, or -1 if free
int resolve(const std::vector<Name> &env, const Name &n) {
  for (std::size_t i = env.size(); i-- > 0;)
    if (env[i] == n)
      return static_cast<int>(env.size() - 1 - i);
  return -1;
}

bool same_ref(const std::vector<Name> &ea, const Name &a,
              const std::vector<Name> &eb, const Name &b) {
  int ia = resolve(ea, a), ib = resolve(eb, b);
  if (ia != ib)
    return false;
  return ia >= 0 || a == b;
}

bool alpha_rec(const Nre &a, const Nre &b, std::vector<Name> &ea,
               std::vector<Name> &eb) {
  if (a.kind() != b.kind())
    return false;
  using K = Nre::Kind;
  switch (a.kind()) {
  case K::One:
  case K::Zero:
    return true;
  case K::Letter:
    return a.sym() == b.sym();
  case K::Name:
  case K::Under:
    return same_ref(ea, a.atom(), eb, b.atom());
  case K::Sum:
  case K::Concat:
    return alpha_rec(a.left(), b.left(), ea, eb) &&
           alpha_rec(a.right(), b.right(), ea, eb);
  case K::Star:
    return alpha_rec(a.body(), b.body(), ea, eb);
  case K::Binder: {
    if (a.plain_binder() != b.plain_binder())
      return false;
    if (!a.plain_binder() && !same_ref(ea, a.close(), eb, b.close()))
      return false;
    ea.push_back(a.atom());
    eb.push_back(b.atom());
    bool ok = alpha_rec(a.body(), b.body(), ea, eb);
    ea.pop_back();
    eb.pop_back();
    return ok;
  }
  }
  return false;
}

} // namespace

bool alpha_eq(const Nre &a, const Nre &b) {
  std::vector<Name> ea, eb;
  return alpha_rec(a, b, ea, eb);
}

namespace {

bool is_fne(const Nre &e, const std::vector<Name> &prefix,
            std::optional<Name> &extra) {
  auto in_prefix = [&](const Name &n) {
    return std::find(prefix.begin(), prefix.end(), n) != prefix.end();
  };
  using K = Nre::Kind;
  switch (e.kind()) {
  case K::One:
  case K::Zero:
  case K::Letter:
    return true;
  case K::Name:
  case K::Under:
    return in_prefix(e.atom());
  case K::Sum:
  case K::Concat:
    return is_fne(e.left(), prefix, extra) && is_fne(e.right(), prefix, extra);
  case K::Star:
    return is_fne(e.body(), prefix, extra);
  case K::Binder: {
    Name x = e.atom();
    if (in_prefix(x) || e.plain_binder() || !in_prefix(e.close()))
      return false;
    if (e.body().kind() != K::Name || e.body().atom() != x)
      return false;
    if (extra && *extra != x)
      return false;
    extra = x;
    return true;
  }
  }
  return false;
}

} // namespace

std::optional<int> classify_first_degree(const Nre &e) {
  std::vector<Name> chain;
  std::vector<const Nre *> bodies{&e};
  const Nre *cur = &e;
  while (cur->kind() == Nre::Kind::Binder && cur->plain_binder()) {
    if (std::find(chain.begin(), chain.end(), cur->atom()) != chain.end())
      break;
    chain.push_back(cur->atom());
    cur = &cur->body();
    bodies.push_back(cur);
  }
  for (int h = static_cast<int>(chain.size()); h >= 0; --h) {
    std::vector<Name> prefix(chain.begin(), chain.begin() + h);
    std::optional<Name> extra;
    if (is_fne(*bodies[h], prefix, extra))
      return h;
  }
  return std::nullopt;
}

int binder_depth(const Nre &e) {
  using K = Nre::Kind;
  switch (e.kind()) {
  case K::Sum:
  case K::Concat:
    return std::max(binder_depth(e.left()), binder_depth(e.right()));
  case K::Star:
    return binder_depth(e.body());
  case K::Binder:
    return 1 + binder_depth(e.body());
  default:
    return 0;
  }
}

Alphabet letters_of(const Nre &e) {
  Alphabet out;
  std::function<void(const Nre &)> go = [&](const Nre &x) {
    using K = Nre::Kind;
    switch (x.kind()) {
    case K::Letter:
      out.insert(x.sym());
      break;
    case K::Sum:
    case K::Concat:
      go(x.left());
      go(x.right());
      break;
    case K::Star:
    case K::Binder:
      go(x.body());
      break;
    default:
      break;
    }
  };
  go(e);
  return out;
}

} // namespace nomre
