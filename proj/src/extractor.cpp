#include "nomre/extractor.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>

namespace nomre {

LayeredView layered_view(const Cda &a) {
  auto rep = validate(a);
  if (!rep.ok())
    throw InvalidAutomaton(rep.str());
  LayeredView v;
  v.layers.resize(a.max_regs() + 1);
  for (std::size_t i = 0; i < a.states.size(); ++i)
    v.layers[a.states[i].regs].push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < a.transitions.size(); ++i) {
    int t = static_cast<int>(i);
    switch (a.transitions[i].label.kind) {
    case Label::Kind::Star:
      v.up.push_back(t);
      break;
    case Label::Kind::Close:
      v.down.push_back(t);
      break;
    default:
      v.intra.push_back(t);
    }
  }
  return v;
}

Cda determinize_layers(const Cda &a) {
  layered_view(a);
  auto out = a.out_edges();
  auto closure = [&](std::set<int> s) {
    std::vector<int> todo(s.begin(), s.end());
    while (!todo.empty()) {
      int q = todo.back();
      todo.pop_back();
      for (int t : out[q]) {
        const auto &tr = a.transitions[t];
        if (tr.label.kind == Label::Kind::Eps && s.insert(tr.to).second)
          todo.push_back(tr.to);
      }
    }
    return s;
  };
  Cda d;
  std::map<std::set<int>, int> index;
  std::deque<std::set<int>> queue;
  auto intern = [&](const std::set<int> &s) {
    auto it = index.find(s);
    if (it != index.end())
      return it->second;
    bool fin = std::any_of(s.begin(), s.end(),
                           [&](int q) { return a.states[q].final; });
    int id = d.add_state("d" + std::to_string(d.states.size()),
                         a.states[*s.begin()].regs, fin);
    index.emplace(s, id);
    queue.push_back(s);
    return id;
  };
  d.initial = intern(closure({a.initial}));
  while (!queue.empty()) {
    std::set<int> s = queue.front();
    queue.pop_front();
    int from = index.at(s);
    std::map<Label, std::set<int>> succ;
    for (int q : s)
      for (int t : out[q]) {
        const auto &tr = a.transitions[t];
        if (tr.label.kind != Label::Kind::Eps)
          succ[tr.label].insert(tr.to);
      }
    for (auto &[l, ts] : succ)
      d.add(from, l, intern(closure(ts)));
  }
  return d;
}

Name canonical_name(int i) { return Name::user("n" + std::to_string(i)); }

namespace {

bool is_zero(const Nre &e) { return e.kind() == Nre::Kind::Zero; }
bool is_one(const Nre &e) { return e.kind() == Nre::Kind::One; }

Nre mk_sum(const Nre &a, const Nre &b) {
  if (is_zero(a))
    return b;
  if (is_zero(b) || a == b)
    return a;
  return Nre::sum(a, b);
}

Nre mk_concat(const Nre &a, const Nre &b) {
  if (is_zero(a) || is_zero(b))
    return Nre::zero();
  if (is_one(a))
    return b;
  if (is_one(b))
    return a;
  return Nre::concat(a, b);
}

Nre mk_star(const Nre &a) {
  if (is_zero(a) || is_one(a))
    return Nre::one();
  if (a.kind() == Nre::Kind::Star)
    return a;
  return Nre::star(a);
}

Nre atom(const Label &l) {
  switch (l.kind) {
  case Label::Kind::Eps:
    return Nre::one();
  case Label::Kind::Letter:
    return Nre::letter(l.letter);
  case Label::Kind::Reg:
    return Nre::name(canonical_name(l.index));
  case Label::Kind::Under:
    return Nre::under(canonical_name(l.index));
  default:
    throw InvalidAutomaton("layer-changing label inside a layer");
  }
}

class Extractor {
public:
  explicit Extractor(const Cda &a) : a_(a), out_(a.out_edges()) {
    for (const auto &t : a.transitions)
      if (t.label.kind == Label::Kind::Close)
        closes_into_[a.states[t.from].regs].push_back(&t);
  }

  Nre run() {
    Nre e = Nre::zero();
    for (std::size_t f = 0; f < a_.states.size(); ++f)
      if (a_.states[f].final)
        e = mk_sum(e, path(a_.initial, static_cast<int>(f)));
    return e;
  }

private:
  using Edges = std::map<std::pair<int, int>, Nre>;

  const Cda &a_;
  std::vector<std::vector<int>> out_;
  std::map<int, std::vector<const Transition *>> closes_into_;
  std::map<std::pair<int, int>, Nre> memo_;
  std::map<int, Edges> layer_edges_;

  // Generalised edges of layer j: ordinary labels plus one binder block
  // per ⋆-entry / Close-exit pair of layer j + 1.
  const Edges &edges(int j) {
    auto it = layer_edges_.find(j);
    if (it != layer_edges_.end())
      return it->second;
    Edges es;
    auto add = [&](int p, int q, const Nre &e) {
      auto [at, fresh] = es.emplace(std::make_pair(p, q), e);
      if (!fresh)
        at->second = mk_sum(at->second, e);
    };
    for (std::size_t p = 0; p < a_.states.size(); ++p) {
      if (a_.states[p].regs != j)
        continue;
      for (int t : out_[p]) {
        const auto &tr = a_.transitions[t];
        if (tr.label.kind == Label::Kind::Close)
          continue;
        if (tr.label.kind != Label::Kind::Star) {
          add(tr.from, tr.to, atom(tr.label));
          continue;
        }
        for (const Transition *c : closes_into_[j + 1]) {
          Nre body = path(tr.to, c->from);
          if (is_zero(body))
            continue;
          add(tr.from, c->to,
              Nre::binder(canonical_name(j + 1), body,
                          canonical_name(c->label.index)));
        }
      }
    }
    return layer_edges_.emplace(j, std::move(es)).first->second;
  }

  // Label paths from p to q that never drop below p's layer.
  Nre path(int p, int q) {
    auto key = std::make_pair(p, q);
    if (auto it = memo_.find(key); it != memo_.end())
      return it->second;
    const int j = a_.states[p].regs;
    const Edges &es = edges(j);

    std::map<int, std::vector<int>> fwd, bwd;
    for (const auto &[k, e] : es) {
      fwd[k.first].push_back(k.second);
      bwd[k.second].push_back(k.first);
    }
    auto reach = [](int s, std::map<int, std::vector<int>> &g) {
      std::set<int> seen{s};
      std::vector<int> todo{s};
      while (!todo.empty()) {
        int x = todo.back();
        todo.pop_back();
        for (int y : g[x])
          if (seen.insert(y).second)
            todo.push_back(y);
      }
      return seen;
    };
    std::set<int> from_p = reach(p, fwd), to_q = reach(q, bwd);
    std::set<int> live;
    std::set_intersection(from_p.begin(), from_p.end(), to_q.begin(),
                          to_q.end(), std::inserter(live, live.end()));
    if (!live.count(p) || !live.count(q))
      return memo_.emplace(key, Nre::zero()).first->second;

    // state elimination between a new source and a new sink
    const int src = -1, snk = -2;
    Edges g;
    for (const auto &[k, e] : es)
      if (live.count(k.first) && live.count(k.second))
        g.emplace(k, e);
    g.insert_or_assign({src, p}, Nre::one());
    g.insert_or_assign({q, snk}, Nre::one());

    std::set<int> remaining = live;
    while (!remaining.empty()) {
      int best = -1;
      std::size_t best_deg = 0;
      for (int x : remaining) {
        std::size_t deg = 0;
        for (const auto &kv : g)
          deg += (kv.first.first == x) + (kv.first.second == x);
        if (best < 0 || deg < best_deg) {
          best = x;
          best_deg = deg;
        }
      }
      remaining.erase(best);
      Nre loop = Nre::one();
      std::vector<std::pair<int, Nre>> ins, outs;
      for (const auto &[k, e] : g) {
        if (k.first == best && k.second == best)
          loop = mk_star(e);
        else if (k.second == best)
          ins.emplace_back(k.first, e);
        else if (k.first == best)
          outs.emplace_back(k.second, e);
      }
      for (auto it = g.begin(); it != g.end();)
        it = it->first.first == best || it->first.second == best ? g.erase(it)
                                                                 : std::next(it);
      for (const auto &[x, ex] : ins)
        for (const auto &[y, ey] : outs) {
          Nre e = mk_concat(mk_concat(ex, loop), ey);
          auto [at, fresh] = g.emplace(std::make_pair(x, y), e);
          if (!fresh)
            at->second = mk_sum(at->second, e);
        }
    }
    auto it = g.find({src, snk});
    Nre r = it == g.end() ? Nre::zero() : it->second;
    return memo_.emplace(key, r).first->second;
  }
};

} // namespace

Nre extract_expr(const Cda &a, ExtractOptions opt) {
  layered_view(a);
  if (opt.determinize)
    return Extractor(determinize_layers(a)).run();
  return Extractor(a).run();
}

} // namespace nomre
