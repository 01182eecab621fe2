#include "nomre/compiler.hpp"

#include <algorithm>

namespace nomre {

Name binder_name(const std::vector<Name> &pre, const Nre &binder) {
  NameSet avoid(pre.begin(), pre.end());
  for (const auto &n : all_names(binder))
    avoid.insert(n);
  return canonical_fresh(avoid);
}

int context_index(const std::vector<Name> &pre, const Name &n) {
  auto it = std::find(pre.begin(), pre.end(), n);
  if (it == pre.end())
    throw CompileError("name " + n.str() + " is not in the pre-context [" +
                       names_str(pre) + "]");
  return static_cast<int>(it - pre.begin()) + 1;
}

int close_index(const std::vector<Name> &pre, const Nre &binder) {
  if (binder.plain_binder())
    return static_cast<int>(pre.size()) + 1;
  return context_index(pre, binder.close());
}

namespace {

struct Fragment {
  int init;
  std::vector<int> finals;
};

class Builder {
public:
  Cda a;

  Fragment build(const Nre &e, const std::vector<Name> &pre) {
    const int k = static_cast<int>(pre.size());
    using K = Nre::Kind;
    switch (e.kind()) {
    case K::One: {
      int q = a.add_state(k);
      return {q, {q}};
    }
    case K::Zero:
      return {a.add_state(k), {}};
    case K::Letter:
      return edge(k, Label::sym(e.sym()));
    case K::Name:
      return edge(k, Label::reg(context_index(pre, e.atom())));
    case K::Under:
      return edge(k, Label::under(context_index(pre, e.atom())));
    case K::Sum: {
      int q = a.add_state(k);
      Fragment l = build(e.left(), pre);
      Fragment r = build(e.right(), pre);
      a.add(q, Label::eps(), l.init);
      a.add(q, Label::eps(), r.init);
      l.finals.insert(l.finals.end(), r.finals.begin(), r.finals.end());
      return {q, l.finals};
    }
    case K::Concat: {
      Fragment l = build(e.left(), pre);
      Fragment r = build(e.right(), pre);
      for (int f : l.finals)
        a.add(f, Label::eps(), r.init);
      return {l.init, r.finals};
    }
    case K::Star: {
      // a dedicated loop state keeps the body's inner cycles from
      // accepting partial iterations
      int q = a.add_state(k);
      Fragment b = build(e.body(), pre);
      a.add(q, Label::eps(), b.init);
      for (int f : b.finals)
        a.add(f, Label::eps(), q);
      return {q, {q}};
    }
    case K::Binder: {
      Name nu = binder_name(pre, e);
      int ci = close_index(pre, e);
      Nre body = apply_perm_expr(Perm::transpose(e.atom(), nu), e.body());
      auto inner = pre;
      inner.push_back(nu);
      int qs = a.add_state(k);
      Fragment b = build(body, inner);
      int qt = a.add_state(k);
      a.add(qs, Label::star(), b.init);
      for (int f : b.finals)
        a.add(f, Label::close(ci), qt);
      return {qs, {qt}};
    }
    }
    throw CompileError("unknown expression node");
  }

private:
  Fragment edge(int k, Label l) {
    int p = a.add_state(k);
    int q = a.add_state(k);
    a.add(p, std::move(l), q);
    return {p, {q}};
  }
};

} // namespace

CdaInContext compile_in_context(const ContextTriple<Nre> &t) {
  {
    NameSet s(t.pre.begin(), t.pre.end());
    if (s.size() != t.pre.size())
      throw CompileError("pre-context has repeated names");
  }
  for (const auto &n : free_names(t.payload))
    context_index(t.pre, n);
  Builder b;
  Fragment f = b.build(t.payload, t.pre);
  b.a.initial = f.init;
  for (int q : f.finals)
    b.a.states[q].final = true;
  return {t.pre, std::move(b.a), t.post};
}

Cda compile(const Nre &e) {
  auto rep = check_wellformed(e, true);
  if (!rep.ok())
    throw CompileError("cannot compile: " + rep.str());
  return compile_in_context({{}, e, {}}).payload;
}

} // namespace nomre
