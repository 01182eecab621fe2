#include "nomre/langcalc.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

namespace nomre {

// ------------------------------------------------------------ FreshCond

FreshCond FreshCond::neq(Name a, Name b) {
  FreshCond c;
  c.kind = Kind::Neq;
  c.subject = a;
  c.other = b;
  return c;
}

FreshCond FreshCond::local(Name p, std::vector<Name> wrt) {
  FreshCond c;
  c.kind = Kind::Local;
  c.subject = p;
  c.wrt = std::move(wrt);
  return c;
}

FreshCond FreshCond::global(Name p, int reg, std::vector<Name> wrt) {
  FreshCond c;
  c.kind = Kind::Global;
  c.subject = p;
  c.reg = reg;
  c.wrt = std::move(wrt);
  return c;
}

FreshCond FreshCond::conj(std::vector<FreshCond> cs) {
  FreshCond c;
  c.kind = Kind::And;
  c.children = std::move(cs);
  return c;
}

FreshCond FreshCond::disj(std::vector<FreshCond> cs) {
  FreshCond c;
  c.kind = Kind::Or;
  c.children = std::move(cs);
  return c;
}

FreshCond FreshCond::permute(const Perm &p) const {
  FreshCond c = *this;
  if (kind == Kind::Neq || kind == Kind::Local || kind == Kind::Global)
    c.subject = p(subject);
  if (kind == Kind::Neq)
    c.other = p(other);
  c.wrt = apply_perm_names(p, wrt);
  for (auto &ch : c.children)
    ch = ch.permute(p);
  return c;
}

std::string FreshCond::str() const {
  switch (kind) {
  case Kind::Neq:
    return subject.str() + " != " + other.str();
  case Kind::Local:
    return subject.str() + " # " + names_str(wrt);
  case Kind::Global:
    return subject.str() + " #_" + std::to_string(reg) + " " + names_str(wrt);
  case Kind::And: {
    std::string out;
    for (const auto &c : children) {
      std::string s = c.str();
      if (s.empty())
        continue;
      if (!out.empty())
        out += ", ";
      out += c.kind == Kind::Or ? "(" + s + ")" : s;
    }
    return out;
  }
  case Kind::Or: {
    if (children.empty())
      return "false";
    std::string out;
    for (const auto &c : children) {
      if (!out.empty())
        out += " | ";
      out += c.kind == Kind::And && c.children.size() > 1 ? "(" + c.str() + ")"
                                                           : c.str();
    }
    return out;
  }
  }
  return {};
}

namespace {

std::string name_key(const Name &n) {
  char buf[16];
  switch (n.kind()) {
  case Name::Kind::User:
    return "0" + std::string(n.spelling()) + '\x01';
  case Name::Kind::Fresh:
    std::snprintf(buf, sizeof buf, "1%010u", n.index());
    return buf;
  case Name::Kind::Placeholder:
    std::snprintf(buf, sizeof buf, "2%010u", n.index());
    return buf;
  }
  return {};
}

} // namespace

std::string FreshCond::key() const {
  std::string k;
  if (kind == Kind::And || kind == Kind::Or) {
    k = kind == Kind::And ? "\x03" : "\x04";
    for (const auto &c : children)
      k += '(' + c.key() + ')';
    return k;
  }
  k = name_key(subject);
  k += static_cast<char>('0' + static_cast<int>(kind));
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", reg);
  k += buf;
  if (kind == Kind::Neq)
    k += name_key(other);
  for (const auto &n : wrt)
    k += ',' + name_key(n);
  return k;
}

std::string SchematicWord::str() const {
  if (is_bottom())
    return "[[ bottom ]]";
  std::string w = word.empty() ? "eps" : word_str(word);
  std::string c = cond.str();
  return "[[ " + w + (c.empty() ? "" : " | " + c) + " ]]";
}

// ------------------------------------------------------------- CTXC

const char *rule_tag(DerivationTree::Rule r) {
  using R = DerivationTree::Rule;
  switch (r) {
  case R::One:
    return "(1)";
  case R::Zero:
    return "(0)";
  case R::Letter:
    return "(s)";
  case R::Name:
    return "(n)";
  case R::Under:
    return "(_n)";
  case R::Sum1:
    return "(+1)";
  case R::Sum2:
    return "(+2)";
  case R::Concat:
    return "(o)";
  case R::Star:
    return "(*)";
  case R::BindEq:
    return "(<>=)";
  case R::BindNeq:
    return "(<>!=)";
  }
  return "(?)";
}

ExtantChronicle binder_post(const Nre &binder, const ExtantChronicle &post,
                            const Name &nu) {
  if (binder.plain_binder())
    return post.extend(nu).push(Chronicle({nu}, nu));
  Name m = binder.close();
  ExtantChronicle e = post.extend(nu).push(Chronicle({nu, m}, nu));
  Perm sw = Perm::transpose(m, nu);
  std::vector<Chronicle> es;
  for (const auto &c : e.entries())
    es.emplace_back(c.history, sw(c.cv));
  return ExtantChronicle(std::move(es));
}

namespace {

void check_in_context(const std::vector<Name> &pre, const Name &n) {
  if (std::find(pre.begin(), pre.end(), n) == pre.end())
    throw CalcError("name " + n.str() + " is not in the pre-context [" +
                    names_str(pre) + "]");
}

void derive(const std::vector<Name> &C, const Nre &e,
            const ExtantChronicle &E, int bound,
            std::vector<DerivationTree> &out) {
  using K = Nre::Kind;
  using R = DerivationTree::Rule;
  ContextTriple<Nre> ctx{C, e, E};
  auto leaf = [&](R r) { out.push_back({r, 0, ctx, {}}); };
  switch (e.kind()) {
  case K::One:
    return leaf(R::One);
  case K::Zero:
    return leaf(R::Zero);
  case K::Letter:
    return leaf(R::Letter);
  case K::Name:
    check_in_context(C, e.atom());
    return leaf(R::Name);
  case K::Under:
    check_in_context(C, e.atom());
    return leaf(R::Under);
  case K::Sum: {
    std::vector<DerivationTree> l, r;
    derive(C, e.left(), E, bound, l);
    derive(C, e.right(), E, bound, r);
    for (auto &t : l)
      out.push_back({R::Sum1, 0, ctx, {std::move(t)}});
    for (auto &t : r)
      out.push_back({R::Sum2, 0, ctx, {std::move(t)}});
    return;
  }
  case K::Concat: {
    std::vector<DerivationTree> l, r;
    derive(C, e.left(), natural_chronicle(C), bound, l);
    derive(C, e.right(), E, bound, r);
    for (const auto &a : l)
      for (const auto &b : r)
        out.push_back({R::Concat, 0, ctx, {a, b}});
    return;
  }
  case K::Star: {
    DerivationTree one{R::One, 0, {C, Nre::one(), E}, {}};
    out.push_back({R::Star, 0, ctx, {one}});
    Nre u = e.body();
    for (int h = 1; h <= bound; ++h) {
      std::vector<DerivationTree> ts;
      derive(C, u, E, bound, ts);
      for (auto &t : ts)
        out.push_back({R::Star, h, ctx, {std::move(t)}});
      u = Nre::concat(u, e.body());
    }
    return;
  }
  case K::Binder: {
    Name nu = binder_name(C, e);
    if (!e.plain_binder())
      check_in_context(C, e.close());
    Nre body = apply_perm_expr(Perm::transpose(e.atom(), nu), e.body());
    auto inner = C;
    inner.push_back(nu);
    std::vector<DerivationTree> ts;
    derive(inner, body, binder_post(e, E, nu), bound, ts);
    R r = e.plain_binder() ? R::BindEq : R::BindNeq;
    for (auto &t : ts)
      out.push_back({r, 0, ctx, {std::move(t)}});
    return;
  }
  }
}

} // namespace

std::vector<DerivationTree> ctxc_derive(const ContextTriple<Nre> &t,
                                        int star_bound) {
  std::vector<DerivationTree> out;
  derive(t.pre, t.payload, t.post, star_bound, out);
  return out;
}

// ------------------------------------------------------------- LNGC

namespace {

struct TreeEval {
  std::uint32_t next;
  std::vector<std::string> *lines = nullptr;

  struct Out {
    Word word;
    std::vector<FreshCond> conds;
    ExtantChronicle post;
    bool bottom = false;

    SchematicWord sw() const {
      if (bottom)
        return {{}, FreshCond::falsity()};
      return {word, FreshCond::conj(conds)};
    }
  };

  Out eval(const DerivationTree &t, int depth) {
    std::size_t at = lines ? lines->size() : 0;
    if (lines)
      lines->emplace_back();
    Out o = eval_node(t, depth);
    if (lines) {
      std::string tag = rule_tag(t.rule);
      if (t.rule == DerivationTree::Rule::Star)
        tag = "(*h=" + std::to_string(t.star_h) + ")";
      (*lines)[at] = std::string(2 * depth, ' ') + tag + " [" +
                     names_str(t.ctx.pre) + "] ‡ " + render(t.ctx.payload) +
                     " ‡ " + extant_str(t.ctx.post) + "  ==>  " +
                     o.sw().str() + " ‡ " + extant_str(o.post);
    }
    return o;
  }

  Out eval_node(const DerivationTree &t, int depth) {
    using R = DerivationTree::Rule;
    const auto &C = t.ctx.pre;
    const auto &E = t.ctx.post;
    const Nre &e = t.ctx.payload;
    switch (t.rule) {
    case R::One:
      return {{}, {}, E};
    case R::Zero:
      return {{}, {}, E, true};
    case R::Letter:
      return {{Letter{e.sym()}}, {}, E};
    case R::Name:
      return {{e.atom()}, {}, E};
    case R::Under: {
      int i = context_index(C, e.atom());
      Name star = Name::placeholder(next++);
      std::vector<FreshCond> cs{
          FreshCond::local(star, C),
          FreshCond::global(star, i, {C.begin() + (i - 1), C.end()})};
      Perm sw = Perm::transpose(e.atom(), star);
      std::vector<Chronicle> es;
      ExtantChronicle ext = E.extend(star);
      for (const auto &c : ext.entries())
        es.emplace_back(c.history, sw(c.cv));
      return {{star}, std::move(cs), ExtantChronicle(std::move(es))};
    }
    case R::Sum1:
    case R::Sum2:
    case R::Star:
      return eval(t.children[0], depth + 1);
    case R::Concat: {
      Out a = eval(t.children[0], depth + 1);
      Out b = eval(t.children[1], depth + 1);
      if (a.bottom || b.bottom)
        return {{}, {}, E, true};
      auto h = a.post.hcv();
      Perm pi = Perm::from_lists(C, h);
      Out o;
      o.word = a.word;
      for (const auto &s : apply_perm_word(pi, b.word))
        o.word.push_back(s);
      o.conds = a.conds;
      for (const auto &c : b.conds) {
        if (c.kind == FreshCond::Kind::Global &&
            c.reg <= static_cast<int>(C.size())) {
          auto w = a.post[c.reg - 1].history;
          for (const auto &n : apply_perm_names(pi, c.wrt))
            w.push_back(n);
          o.conds.push_back(FreshCond::global(pi(c.subject), c.reg, w));
        } else {
          o.conds.push_back(c.permute(pi));
        }
      }
      std::vector<Chronicle> es;
      for (std::size_t i = 0; i < b.post.size(); ++i) {
        auto w = a.post[i].history;
        for (const auto &n : apply_perm_names(pi, b.post[i].history))
          w.push_back(n);
        es.emplace_back(std::move(w), pi(b.post[i].cv));
      }
      o.post = ExtantChronicle(std::move(es));
      return o;
    }
    case R::BindEq:
    case R::BindNeq: {
      Out b = eval(t.children[0], depth + 1);
      if (b.bottom)
        return {{}, {}, E, true};
      Name nu = t.children[0].ctx.pre.back();
      Name star = Name::placeholder(next++);
      Perm rho = Perm::transpose(nu, star);
      Out o;
      o.word = apply_perm_word(rho, b.word);
      o.conds.push_back(FreshCond::local(star, C));
      for (const auto &c : b.conds)
        o.conds.push_back(c.permute(rho));
      o.post = b.post.permute(rho).pop();
      return o;
    }
    }
    throw CalcError("unknown rule");
  }
};

} // namespace

LngcResult lngc_eval(const DerivationTree &tree,
                     std::uint32_t first_placeholder) {
  TreeEval ev{first_placeholder};
  auto o = ev.eval(tree, 0);
  return {o.sw(), o.post};
}

std::string dump_derivation(const DerivationTree &tree) {
  std::vector<std::string> lines;
  TreeEval ev{0, &lines};
  ev.eval(tree, 0);
  std::string out;
  for (const auto &l : lines)
    out += l + '\n';
  return out;
}

std::string derivation_report(const Nre &e, int star_bound) {
  auto trees = ctxc_derive({{}, e, {}}, star_bound);
  std::string out;
  std::size_t k = 0;
  for (const auto &t : trees) {
    out += "derivation " + std::to_string(++k) + " of " +
           std::to_string(trees.size()) + "\n";
    out += dump_derivation(t);
    out += "normal form: " + schematic_normalize(lngc_eval(t).sw).str() + "\n";
  }
  return out;
}

// ------------------------------------------------ schematic operations

namespace {

bool holds(const FreshCond &c, const std::map<Name, Name> &val) {
  auto v = [&](const Name &n) {
    auto it = val.find(n);
    return it == val.end() ? n : it->second;
  };
  using K = FreshCond::Kind;
  switch (c.kind) {
  case K::Neq:
    return v(c.subject) != v(c.other);
  case K::Local:
  case K::Global: {
    Name s = v(c.subject);
    for (const auto &n : c.wrt)
      if (v(n) == s)
        return false;
    return true;
  }
  case K::And:
    for (const auto &ch : c.children)
      if (!holds(ch, val))
        return false;
    return true;
  case K::Or:
    for (const auto &ch : c.children)
      if (holds(ch, val))
        return true;
    return false;
  }
  return false;
}

void collect_placeholders(const FreshCond &c, NameSet &out) {
  if (c.subject.is_placeholder())
    out.insert(c.subject);
  if (c.kind == FreshCond::Kind::Neq && c.other.is_placeholder())
    out.insert(c.other);
  for (const auto &n : c.wrt)
    if (n.is_placeholder())
      out.insert(n);
  for (const auto &ch : c.children)
    collect_placeholders(ch, out);
}

// Placeholders in order of first occurrence inside a condition.
void placeholder_order(const FreshCond &c, std::vector<Name> &out) {
  auto add = [&](const Name &n) {
    if (n.is_placeholder() && std::find(out.begin(), out.end(), n) == out.end())
      out.push_back(n);
  };
  if (c.kind == FreshCond::Kind::And || c.kind == FreshCond::Kind::Or) {
    for (const auto &ch : c.children)
      placeholder_order(ch, out);
    return;
  }
  add(c.subject);
  if (c.kind == FreshCond::Kind::Neq)
    add(c.other);
  for (const auto &n : c.wrt)
    add(n);
}

// Flattened, deduplicated leaves; Or nodes are normalised recursively.
void flatten(const FreshCond &c, std::vector<FreshCond> &out) {
  using K = FreshCond::Kind;
  switch (c.kind) {
  case K::And:
    for (const auto &ch : c.children)
      flatten(ch, out);
    return;
  case K::Or: {
    FreshCond d = FreshCond::disj({});
    for (const auto &ch : c.children) {
      std::vector<FreshCond> inner;
      flatten(ch, inner);
      d.children.push_back(FreshCond::conj(std::move(inner)));
    }
    out.push_back(std::move(d));
    return;
  }
  case K::Neq:
    out.push_back(c);
    return;
  case K::Local:
  case K::Global: {
    std::vector<Name> w;
    for (const auto &n : c.wrt)
      if (std::find(w.begin(), w.end(), n) == w.end())
        w.push_back(n);
    if (w.empty())
      return;
    FreshCond d = c;
    d.wrt = std::move(w);
    out.push_back(std::move(d));
    return;
  }
  }
}

// Renames placeholders by `m` (a partial map; others kept).
FreshCond rename(const FreshCond &c, const std::map<Name, Name> &m) {
  auto r = [&](const Name &n) {
    auto it = m.find(n);
    return it == m.end() ? n : it->second;
  };
  FreshCond d = c;
  d.subject = r(c.subject);
  d.other = r(c.other);
  for (auto &n : d.wrt)
    n = r(n);
  for (auto &ch : d.children)
    ch = rename(ch, m);
  return d;
}

void sort_conds(std::vector<FreshCond> &cs) {
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
}

} // namespace

bool schematic_member(const SchematicWord &sw, const Word &w) {
  if (sw.is_bottom() || sw.word.size() != w.size())
    return false;
  std::map<Name, Name> val;
  NameSet used;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto &s = sw.word[i];
    if (const auto *n = std::get_if<Name>(&s); n && n->is_placeholder()) {
      const auto *m = std::get_if<Name>(&w[i]);
      if (!m)
        return false;
      auto [it, fresh] = val.emplace(*n, *m);
      if (!fresh && it->second != *m)
        return false;
    } else if (s != w[i]) {
      return false;
    }
  }
  for (const auto &s : w)
    if (const auto *n = std::get_if<Name>(&s))
      used.insert(*n);
  NameSet ps;
  collect_placeholders(sw.cond, ps);
  // placeholders absent from the word stand for distinct fresh names
  std::uint32_t k = 0;
  for (const auto &p : ps) {
    if (val.count(p))
      continue;
    Name f;
    do
      f = Name::fresh(k++);
    while (used.count(f));
    val.emplace(p, f);
  }
  return holds(sw.cond, val);
}

SchematicWord schematic_normalize(const SchematicWord &sw) {
  if (sw.is_bottom())
    return {{}, FreshCond::falsity()};
  std::vector<FreshCond> cs;
  flatten(sw.cond, cs);

  std::map<Name, Name> ren;
  std::uint32_t next = 0;
  for (const auto &n : word_names(sw.word))
    if (n.is_placeholder())
      ren.emplace(n, Name::placeholder(next++));
  NameSet all;
  for (const auto &c : cs)
    collect_placeholders(c, all);

  // The rest are numbered greedily: sort conditions with unnumbered
  // placeholders masked and take the first unnumbered one met.
  const Name mask = Name::fresh(0xffffffffu);
  for (;;) {
    std::size_t missing = 0;
    for (const auto &p : all)
      missing += !ren.count(p);
    if (!missing)
      break;
    std::map<Name, Name> masked;
    for (const auto &p : all)
      masked.emplace(p, ren.count(p) ? ren.at(p) : mask);
    std::vector<std::pair<FreshCond, FreshCond>> keyed;
    for (const auto &c : cs)
      keyed.emplace_back(rename(c, masked), c);
    std::sort(keyed.begin(), keyed.end());
    bool done = false;
    for (const auto &kc : keyed) {
      std::vector<Name> order;
      placeholder_order(kc.second, order);
      for (const auto &p : order)
        if (!ren.count(p)) {
          ren.emplace(p, Name::placeholder(next++));
          done = true;
          break;
        }
      if (done)
        break;
    }
    if (!done)
      break;
  }
  SchematicWord out;
  for (const auto &s : sw.word) {
    const auto *n = std::get_if<Name>(&s);
    out.word.push_back(n && ren.count(*n) ? Symbol(ren.at(*n)) : s);
  }
  std::vector<FreshCond> rs;
  for (const auto &c : cs) {
    FreshCond r = rename(c, ren);
    if (r.kind == FreshCond::Kind::Or) {
      for (auto &ch : r.children)
        sort_conds(ch.children);
      sort_conds(r.children);
    }
    rs.push_back(std::move(r));
  }
  sort_conds(rs);
  out.cond = FreshCond::conj(std::move(rs));
  return out;
}

std::set<std::pair<Name, Name>> to_inequations(const SchematicWord &sw) {
  std::set<std::pair<Name, Name>> out;
  auto add = [&](Name a, Name b) {
    if (a == b)
      return;
    if (b < a)
      std::swap(a, b);
    out.emplace(a, b);
  };
  std::function<void(const FreshCond &)> go = [&](const FreshCond &c) {
    switch (c.kind) {
    case FreshCond::Kind::Neq:
      add(c.subject, c.other);
      break;
    case FreshCond::Kind::Local:
    case FreshCond::Kind::Global:
      for (const auto &n : c.wrt)
        add(c.subject, n);
      break;
    case FreshCond::Kind::And:
      for (const auto &ch : c.children)
        go(ch);
      break;
    case FreshCond::Kind::Or:
      throw CalcError("disjunctive condition has no inequation form");
    }
  };
  go(sw.cond);
  return out;
}

bool equal_modulo_renaming(const SchematicWord &a, const SchematicWord &b) {
  SchematicWord x = schematic_normalize(a), y = schematic_normalize(b);
  if (x.is_bottom() || y.is_bottom())
    return x.is_bottom() && y.is_bottom();
  if (x.word.size() != y.word.size())
    return false;
  std::map<Name, Name> m;
  for (std::size_t i = 0; i < x.word.size(); ++i) {
    const auto *p = std::get_if<Name>(&x.word[i]);
    const auto *q = std::get_if<Name>(&y.word[i]);
    if (p && q && p->is_placeholder() && q->is_placeholder()) {
      auto [it, fresh] = m.emplace(*p, *q);
      if (!fresh && it->second != *q)
        return false;
    } else if (x.word[i] != y.word[i]) {
      return false;
    }
  }
  NameSet px, py;
  collect_placeholders(x.cond, px);
  collect_placeholders(y.cond, py);
  NameSet img;
  for (const auto &kv : m)
    img.insert(kv.second);
  std::vector<Name> rx, ry;
  for (const auto &p : px)
    if (!m.count(p))
      rx.push_back(p);
  for (const auto &p : py)
    if (!img.count(p))
      ry.push_back(p);
  if (rx.size() != ry.size())
    return false;
  if (rx.size() > 9)
    throw CalcError("too many hidden placeholders to compare");
  std::sort(ry.begin(), ry.end());
  do {
    auto full = m;
    for (std::size_t i = 0; i < rx.size(); ++i)
      full[rx[i]] = ry[i];
    std::vector<FreshCond> cs;
    for (const auto &c : x.cond.children)
      cs.push_back(rename(c, full));
    sort_conds(cs);
    if (cs == y.cond.children)
      return true;
  } while (std::next_permutation(ry.begin(), ry.end()));
  return false;
}

// --------------------------------------------- languages of expressions

namespace {

using Hist = std::set<Name>;
using Post = std::vector<std::pair<Hist, Name>>;

// One schematic result under a pre-context: p # S for (p, S) in `local`,
// relative global marks keyed by (p, register), and the post chronicle.
// Placeholders are ?0 .. ?(nph - 1).
struct Res {
  Word word;
  std::map<Name, Hist> local;
  std::map<std::pair<Name, int>, Hist> global;
  Post post;
  std::uint32_t nph = 0;
};

using NameMap = std::map<Name, Name>;

Name rn(const NameMap &m, const Name &n) {
  auto it = m.find(n);
  return it == m.end() ? n : it->second;
}

Hist rn(const NameMap &m, const Hist &h) {
  Hist o;
  for (const auto &n : h)
    o.insert(rn(m, n));
  return o;
}

Res rename_res(const Res &r, const NameMap &m) {
  Res o;
  o.nph = r.nph;
  for (const auto &s : r.word) {
    const auto *n = std::get_if<Name>(&s);
    o.word.push_back(n ? Symbol(rn(m, *n)) : s);
  }
  for (const auto &[p, h] : r.local)
    o.local[rn(m, p)].merge(rn(m, h));
  for (const auto &[k, h] : r.global)
    o.global[{rn(m, k.first), k.second}].merge(rn(m, h));
  for (const auto &[h, cv] : r.post)
    o.post.emplace_back(rn(m, h), rn(m, cv));
  return o;
}

NameMap perm_map(const Perm &p) {
  NameMap m;
  for (const auto &n : p.support())
    m.emplace(n, p(n));
  return m;
}

Post to_post(const ExtantChronicle &e) {
  Post p;
  for (const auto &c : e.entries())
    p.emplace_back(Hist(c.history.begin(), c.history.end()), c.cv);
  return p;
}

std::vector<Name> hcv(const Post &p) {
  std::vector<Name> o;
  for (const auto &e : p)
    o.push_back(e.second);
  return o;
}

std::string hist_key(const Hist &h) {
  std::string k;
  for (const auto &n : h)
    k += n.str() + ' ';
  return k;
}

std::string res_key(const Res &r) {
  std::string k = word_str(r.word) + '|';
  for (const auto &[p, h] : r.local)
    k += p.str() + '#' + hist_key(h) + ';';
  k += '|';
  for (const auto &[pk, h] : r.global)
    k += pk.first.str() + '@' + std::to_string(pk.second) + '#' +
         hist_key(h) + ';';
  k += '|';
  for (const auto &[h, cv] : r.post)
    k += cv.str() + '(' + hist_key(h) + ')';
  return k;
}

using ResSet = std::map<std::string, Res>;

class Evaluator {
public:
  Evaluator(std::size_t maxlen, int bound) : maxlen_(maxlen), bound_(bound) {}

  ResSet eval(const Nre &e, const std::vector<Name> &C, const Post &E) {
    using K = Nre::Kind;
    ResSet out;
    switch (e.kind()) {
    case K::One:
      add(out, Res{{}, {}, {}, E, 0}, C.size());
      break;
    case K::Zero:
      break;
    case K::Letter:
      if (maxlen_ >= 1)
        add(out, Res{{Letter{e.sym()}}, {}, {}, E, 0}, C.size());
      break;
    case K::Name:
      check_in_context(C, e.atom());
      if (maxlen_ >= 1)
        add(out, Res{{e.atom()}, {}, {}, E, 0}, C.size());
      break;
    case K::Under: {
      int i = context_index(C, e.atom());
      if (maxlen_ < 1)
        break;
      Name star = Name::placeholder(0);
      Res r;
      r.word = {star};
      r.nph = 1;
      if (!C.empty())
        r.local[star] = Hist(C.begin(), C.end());
      r.global[{star, i}] = Hist(C.begin() + (i - 1), C.end());
      Perm sw = Perm::transpose(e.atom(), star);
      for (const auto &[h, cv] : E) {
        Hist nh = h;
        nh.insert(star);
        r.post.emplace_back(std::move(nh), sw(cv));
      }
      add(out, std::move(r), C.size());
      break;
    }
    case K::Sum:
      out = eval(e.left(), C, E);
      for (auto &kv : eval(e.right(), C, E))
        out.insert(std::move(kv));
      break;
    case K::Concat: {
      ResSet l = eval(e.left(), C, natural(C));
      if (l.empty())
        break;
      ResSet r = eval(e.right(), C, E);
      out = combine(l, r, C);
      break;
    }
    case K::Star: {
      // e^h = e^(h-1) e, the left factor under the natural chronicle.
      // Silent iterations still move names between registers, so the
      // unfolding runs to a fixpoint unless a bound is given.
      add(out, Res{{}, {}, {}, E, 0}, C.size());
      if (bound_ == 0)
        break;
      ResSet se = eval(e.body(), C, E);
      out.insert(se.begin(), se.end());
      ResSet sc = eval(e.body(), C, natural(C));
      ResSet prefixes = sc, frontier = sc;
      for (int h = 2; !frontier.empty() && (bound_ < 0 || h <= bound_); ++h) {
        for (auto &kv : combine(frontier, se, C))
          out.insert(std::move(kv));
        ResSet next;
        for (auto &kv : combine(frontier, sc, C))
          if (!prefixes.count(kv.first))
            next.insert(kv);
        prefixes.insert(next.begin(), next.end());
        frontier = std::move(next);
      }
      break;
    }
    case K::Binder: {
      Name nu = binder_name(C, e);
      Nre body = apply_perm_expr(Perm::transpose(e.atom(), nu), e.body());
      auto inner = C;
      inner.push_back(nu);
      Post Ep;
      for (const auto &[h, cv] : E) {
        Hist nh = h;
        nh.insert(nu);
        Ep.emplace_back(std::move(nh), cv);
      }
      if (e.plain_binder()) {
        Ep.emplace_back(Hist{nu}, nu);
      } else {
        Name m = e.close();
        check_in_context(C, m);
        Ep.emplace_back(Hist{nu, m}, nu);
        Perm sw = Perm::transpose(m, nu);
        for (auto &en : Ep)
          en.second = sw(en.second);
      }
      for (auto &[k, r] : eval(body, inner, Ep)) {
        (void)k;
        Name star = Name::placeholder(r.nph);
        Res b = rename_res(r, {{nu, star}});
        b.nph = r.nph + 1;
        if (!C.empty())
          b.local[star].insert(C.begin(), C.end());
        b.post.pop_back();
        add(out, std::move(b), C.size());
      }
      break;
    }
    }
    return out;
  }

private:
  std::size_t maxlen_;
  int bound_;

  static Post natural(const std::vector<Name> &C) {
    return to_post(ExtantChronicle::natural(C));
  }

  ResSet combine(const ResSet &l, const ResSet &r,
                 const std::vector<Name> &C) {
    ResSet out;
    for (const auto &[ka, a] : l) {
      (void)ka;
      Perm pi = Perm::from_lists(C, hcv(a.post));
      for (const auto &[kb, b] : r) {
        (void)kb;
        if (a.word.size() + b.word.size() > maxlen_)
          continue;
        NameMap m = perm_map(pi);
        for (std::uint32_t i = 0; i < b.nph; ++i)
          m[Name::placeholder(i)] = Name::placeholder(i + a.nph);
        Res bb = rename_res(b, m);
        Res o = a;
        o.nph = a.nph + b.nph;
        o.word.insert(o.word.end(), bb.word.begin(), bb.word.end());
        for (auto &[p, h] : bb.local)
          o.local[p].merge(h);
        for (auto &[pk, h] : bb.global) {
          auto &t = o.global[pk];
          t.insert(a.post[pk.second - 1].first.begin(),
                   a.post[pk.second - 1].first.end());
          t.merge(h);
        }
        for (std::size_t i = 0; i < o.post.size(); ++i) {
          o.post[i].first.merge(bb.post[i].first);
          o.post[i].second = bb.post[i].second;
        }
        add(out, std::move(o), C.size());
      }
    }
    return out;
  }

  // Freezes globals of dead registers, projects out placeholders that can
  // no longer be observed, renumbers the rest and inserts.
  void add(ResSet &out, Res r, std::size_t k) {
    if (r.word.size() > maxlen_)
      return;
    for (auto it = r.global.begin(); it != r.global.end();) {
      if (it->first.second > static_cast<int>(k)) {
        r.local[it->first.first].merge(it->second);
        it = r.global.erase(it);
      } else {
        ++it;
      }
    }
    std::vector<Name> keep;
    auto note = [&](const Name &n) {
      if (n.is_placeholder() &&
          std::find(keep.begin(), keep.end(), n) == keep.end())
        keep.push_back(n);
    };
    for (const auto &s : r.word)
      if (const auto *n = std::get_if<Name>(&s))
        note(*n);
    for (const auto &e : r.post)
      note(e.second);
    NameSet kept(keep.begin(), keep.end());
    auto drop = [&](Hist &h) {
      for (auto it = h.begin(); it != h.end();)
        it = it->is_placeholder() && !kept.count(*it) ? h.erase(it)
                                                      : std::next(it);
    };
    for (auto it = r.local.begin(); it != r.local.end();) {
      drop(it->second);
      if (!kept.count(it->first) || it->second.empty())
        it = r.local.erase(it);
      else
        ++it;
    }
    for (auto it = r.global.begin(); it != r.global.end();) {
      drop(it->second);
      if (!kept.count(it->first.first) || it->second.empty())
        it = r.global.erase(it);
      else
        ++it;
    }
    for (auto &e : r.post)
      drop(e.first);
    NameMap m;
    for (std::uint32_t i = 0; i < keep.size(); ++i)
      m.emplace(keep[i], Name::placeholder(i));
    Res c = rename_res(r, m);
    c.nph = static_cast<std::uint32_t>(keep.size());
    out.emplace(res_key(c), std::move(c));
  }
};

SchematicWord to_schematic(const Res &r) {
  std::vector<FreshCond> cs;
  for (const auto &[p, h] : r.local)
    cs.push_back(FreshCond::local(p, {h.begin(), h.end()}));
  for (const auto &[pk, h] : r.global)
    cs.push_back(FreshCond::global(pk.first, pk.second, {h.begin(), h.end()}));
  return {r.word, FreshCond::conj(std::move(cs))};
}

} // namespace

std::vector<LngcResult>
language_schemata_in_context(const ContextTriple<Nre> &t, EvalOptions opt) {
  {
    NameSet s(t.pre.begin(), t.pre.end());
    if (s.size() != t.pre.size())
      throw CalcError("pre-context has repeated names");
  }
  Evaluator ev(opt.maxlen, opt.star_bound);
  std::vector<LngcResult> out;
  for (const auto &[k, r] : ev.eval(t.payload, t.pre, to_post(t.post))) {
    (void)k;
    std::vector<Chronicle> es;
    for (const auto &[h, cv] : r.post)
      es.emplace_back(std::vector<Name>(h.begin(), h.end()), cv);
    out.push_back({to_schematic(r), ExtantChronicle(std::move(es))});
  }
  return out;
}

std::vector<SchematicWord> language_schemata(const Nre &e, EvalOptions opt) {
  std::map<std::string, SchematicWord> uniq;
  for (const auto &r : language_schemata_in_context({{}, e, {}}, opt)) {
    SchematicWord n = schematic_normalize(r.sw);
    uniq.emplace(n.str(), std::move(n));
  }
  std::vector<SchematicWord> out;
  for (auto &kv : uniq)
    out.push_back(std::move(kv.second));
  return out;
}

std::set<Word> instantiate(const SchematicWord &sw,
                           const std::vector<Name> &pool) {
  std::set<Word> out;
  if (sw.is_bottom())
    return out;
  std::vector<Name> ps;
  for (const auto &n : word_names(sw.word))
    if (n.is_placeholder())
      ps.push_back(n);
  std::map<Name, Name> val;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == ps.size()) {
      Word w;
      for (const auto &s : sw.word) {
        const auto *n = std::get_if<Name>(&s);
        w.push_back(n && n->is_placeholder() ? Symbol(val.at(*n)) : s);
      }
      if (schematic_member(sw, w))
        out.insert(std::move(w));
      return;
    }
    for (const auto &n : pool) {
      val[ps[i]] = n;
      go(i + 1);
    }
  };
  go(0);
  return out;
}

std::set<Word> language_enumerate(const Nre &e, const std::vector<Name> &pool,
                                  std::size_t maxlen, int star_bound) {
  std::set<Word> out;
  for (const auto &sw : language_schemata(e, {maxlen, star_bound}))
    out.merge(instantiate(sw, pool));
  return out;
}

bool language_member(const Nre &e, const Word &w, int star_bound) {
  for (const auto &sw : language_schemata(e, {w.size(), star_bound}))
    if (schematic_member(sw, w))
      return true;
  return false;
}

} // namespace nomre
