#include "nomre/cda.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace nomre {

// --------------------------------------------------------------- labels

int Label::delta() const {
  switch (kind) {
  case Kind::Star:
    return 1;
  case Kind::Close:
    return -1;
  default:
    return 0;
  }
}

std::string Label::str() const {
  switch (kind) {
  case Kind::Eps:
    return "eps";
  case Kind::Letter:
    return letter;
  case Kind::Reg:
    return "r" + std::to_string(index);
  case Kind::Star:
    return "*";
  case Kind::Under:
    return "u" + std::to_string(index);
  case Kind::Close:
    return "close" + std::to_string(index);
  }
  return "?";
}

// ------------------------------------------------------------ structure

int Cda::add_state(int regs, bool final) {
  return add_state("q" + std::to_string(states.size()), regs, final);
}

int Cda::add_state(std::string id, int regs, bool final) {
  states.push_back({std::move(id), regs, final});
  return static_cast<int>(states.size()) - 1;
}

int Cda::find(const std::string &id) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i].id == id)
      return static_cast<int>(i);
  return -1;
}

int Cda::max_regs() const {
  int m = 0;
  for (const auto &s : states)
    m = std::max(m, s.regs);
  return m;
}

std::set<std::string> Cda::letters() const {
  std::set<std::string> out;
  for (const auto &t : transitions)
    if (t.label.kind == Label::Kind::Letter)
      out.insert(t.label.letter);
  return out;
}

std::vector<std::vector<int>> Cda::out_edges() const {
  std::vector<std::vector<int>> out(states.size());
  for (std::size_t i = 0; i < transitions.size(); ++i)
    out[transitions[i].from].push_back(static_cast<int>(i));
  return out;
}

std::string ValidationReport::str() const {
  std::string out;
  for (const auto &v : violations)
    out += v + '\n';
  return out;
}

ValidationReport validate(const Cda &a) {
  ValidationReport rep;
  auto &v = rep.violations;
  const int n = static_cast<int>(a.states.size());
  if (n == 0) {
    v.push_back("automaton has no states");
    return rep;
  }
  if (a.initial < 0 || a.initial >= n) {
    v.push_back("initial state out of range");
    return rep;
  }
  std::set<std::string> ids;
  for (const auto &s : a.states) {
    if (!ids.insert(s.id).second)
      v.push_back("duplicate state id " + s.id);
    if (s.regs < 0)
      v.push_back("state " + s.id + " has a negative register count");
    if (s.final && s.regs != 0)
      v.push_back("final state " + s.id + " has " + std::to_string(s.regs) +
                  " registers: |q| = 0 required for final states");
  }
  if (a.states[a.initial].regs != 0)
    v.push_back("initial state " + a.states[a.initial].id +
                " has registers: |q| = 0 required for the initial state");
  for (const auto &t : a.transitions) {
    if (t.from < 0 || t.from >= n || t.to < 0 || t.to >= n) {
      v.push_back("transition endpoint out of range");
      continue;
    }
    const auto &p = a.states[t.from], &q = a.states[t.to];
    std::string tr = p.id + " -" + t.label.str() + "-> " + q.id;
    auto k = t.label.kind;
    if (k == Label::Kind::Reg || k == Label::Kind::Under ||
        k == Label::Kind::Close) {
      if (t.label.index < 1 || t.label.index > p.regs)
        v.push_back(tr + ": register index " + std::to_string(t.label.index) +
                    " outside 1.." + std::to_string(p.regs));
    }
    if (k == Label::Kind::Letter && t.label.letter.empty())
      v.push_back(tr + ": empty letter");
    int want = p.regs + t.label.delta();
    if (q.regs != want) {
      std::string rule = k == Label::Kind::Star    ? "|q'| = |q| + 1"
                         : k == Label::Kind::Close ? "|q'| = |q| - 1"
                                                   : "|q'| = |q|";
      v.push_back(tr + ": violates " + rule);
    }
  }
  return rep;
}

const char *class_name(CdaClass c) {
  switch (c) {
  case CdaClass::CDA:
    return "CDA";
  case CdaClass::CA:
    return "CA";
  case CdaClass::DA:
    return "DA";
  case CdaClass::A:
    return "A";
  }
  return "?";
}

CdaClassInfo class_of(const Cda &a) {
  auto rep = validate(a);
  if (!rep.ok())
    throw InvalidAutomaton(rep.str());
  bool low_close = false, under = false;
  for (const auto &t : a.transitions) {
    if (t.label.kind == Label::Kind::Close &&
        t.label.index < a.states[t.from].regs)
      low_close = true;
    if (t.label.kind == Label::Kind::Under)
      under = true;
  }
  CdaClass c = low_close ? (under ? CdaClass::CDA : CdaClass::DA)
                         : (under ? CdaClass::CA : CdaClass::A);

  bool det = true;
  std::map<std::pair<int, Label>, int> count;
  for (const auto &t : a.transitions) {
    if (t.label.kind == Label::Kind::Eps)
      det = false;
    ++count[{t.from, t.label}];
  }
  for (const auto &[k, cnt] : count)
    if (cnt != 1)
      det = false;
  return {c, det};
}

// ------------------------------------------------------- reference step

std::vector<Configuration> step(const Cda &a, const Configuration &c,
                                const Word &w) {
  if (c.state < 0 || c.state >= static_cast<int>(a.states.size()))
    throw std::invalid_argument("configuration state out of range");
  const int regs = a.states[c.state].regs;
  if (static_cast<int>(c.extant.size()) != regs)
    throw std::invalid_argument("configuration has " +
                                std::to_string(c.extant.size()) +
                                " chronicles in a state with " +
                                std::to_string(regs) + " registers");
  if (c.pos > w.size())
    throw std::invalid_argument("configuration position beyond the word");

  std::vector<Configuration> out;
  const auto hcv = c.extant.hcv();
  auto in_hcv = [&](const Name &n) {
    return std::find(hcv.begin(), hcv.end(), n) != hcv.end();
  };
  const Name *head = nullptr;
  const Letter *head_letter = nullptr;
  if (c.pos < w.size()) {
    head = std::get_if<Name>(&w[c.pos]);
    head_letter = std::get_if<Letter>(&w[c.pos]);
  }

  for (const auto &t : a.transitions) {
    if (t.from != c.state)
      continue;
    const auto &l = t.label;
    switch (l.kind) {
    case Label::Kind::Eps:
      out.push_back({t.to, c.pos, c.extant});
      break;
    case Label::Kind::Letter:
      if (head_letter && head_letter->sym == l.letter)
        out.push_back({t.to, c.pos + 1, c.extant});
      break;
    case Label::Kind::Reg:
      if (head && *head == hcv[l.index - 1])
        out.push_back({t.to, c.pos + 1, c.extant});
      break;
    case Label::Kind::Star: {
      std::vector<Name> cands;
      for (std::size_t i = c.pos; i < w.size(); ++i)
        if (auto n = std::get_if<Name>(&w[i]))
          if (!in_hcv(*n) &&
              std::find(cands.begin(), cands.end(), *n) == cands.end())
            cands.push_back(*n);
      NameSet avoid = c.extant.names();
      for (const auto &n : word_names(w))
        avoid.insert(n);
      cands.push_back(canonical_fresh(avoid));
      for (const auto &n : cands)
        out.push_back(
            {t.to, c.pos, c.extant.extend(n).push(Chronicle({n}, n))});
      break;
    }
    case Label::Kind::Under:
      if (head && !in_hcv(*head) && !c.extant[l.index - 1].contains(*head))
        out.push_back(
            {t.to, c.pos + 1, c.extant.extend(*head).with_cv(l.index - 1, *head)});
      break;
    case Label::Kind::Close: {
      auto e = c.extant.pop();
      if (l.index < regs)
        e = e.with_cv(l.index - 1, c.extant[regs - 1].cv);
      out.push_back({t.to, c.pos, e});
      break;
    }
    }
  }
  return out;
}

// ------------------------------------------------------ search engine

namespace {

// Canonical configurations: histories keep only the names that can still
// be tested (the relevant set), current values outside that set are
// renamed to a reserved block of fresh names in register order.
struct Reg {
  Name cv;
  std::vector<Name> hist; // sorted, relevant names only
};

struct Conf {
  int q;
  std::vector<Reg> regs;
};

class Engine {
public:
  Engine(const Cda &a, const std::vector<Name> &relevant, RunStats *stats)
      : a_(a), edges_(a.out_edges()), stats_(stats) {
    rel_.insert(relevant.begin(), relevant.end());
    std::uint32_t base = 0;
    for (const auto &n : rel_)
      if (n.is_fresh())
        base = std::max(base, n.index() + 1);
    base_ = base;
    cap_ = 10 * a.states.size() * (static_cast<std::size_t>(a.max_regs()) + 1) *
           (rel_.size() + 2);
  }

  bool relevant(const Name &n) const { return rel_.count(n) > 0; }

  void canon(Conf &c) const {
    std::uint32_t k = 0;
    for (auto &r : c.regs)
      if (!relevant(r.cv))
        r.cv = Name::fresh(base_ + k++);
  }

  Name fresh_candidate(const Conf &c) const {
    return Name::fresh(base_ + static_cast<std::uint32_t>(c.regs.size()));
  }

  static void add_hist(std::vector<Name> &h, const Name &n) {
    auto it = std::lower_bound(h.begin(), h.end(), n);
    if (it == h.end() || *it != n)
      h.insert(it, n);
  }

  static bool has(const std::vector<Name> &h, const Name &n) {
    return std::binary_search(h.begin(), h.end(), n);
  }

  static bool in_cvs(const Conf &c, const Name &n) {
    for (const auto &r : c.regs)
      if (r.cv == n)
        return true;
    return false;
  }

  std::string key(const Conf &c) const {
    std::string k;
    auto put = [&](std::uint64_t v) {
      k.append(reinterpret_cast<const char *>(&v), sizeof v);
    };
    put(static_cast<std::uint64_t>(c.q));
    for (const auto &r : c.regs) {
      put(r.cv.hash_key());
      put(r.hist.size());
      for (const auto &n : r.hist)
        put(n.hash_key());
    }
    return k;
  }

  void observe(const Conf &c) {
    if (!stats_)
      return;
    ++stats_->configurations;
    if (static_cast<int>(c.regs.size()) != a_.states[c.q].regs)
      stats_->register_discipline = false;
    for (std::size_t i = 0; i < c.regs.size(); ++i)
      for (std::size_t j = i + 1; j < c.regs.size(); ++j)
        if (c.regs[i].cv == c.regs[j].cv)
          stats_->distinct_cvs = false;
  }

  /// Closure under ε, ⋆ and Close moves.  Star candidates are `cands`
  /// (outside hcv) plus one fresh name.
  std::vector<Conf> closure(std::vector<Conf> seeds,
                            const std::vector<Name> &cands) {
    std::unordered_set<std::string> seen;
    std::vector<Conf> all, frontier;
    for (auto &c : seeds) {
      canon(c);
      if (seen.insert(key(c)).second) {
        observe(c);
        frontier.push_back(c);
        all.push_back(c);
      }
    }
    std::size_t depth = 0;
    while (!frontier.empty()) {
      if (++depth > cap_)
        throw ResourceLimit("non-consuming move chain exceeds " +
                            std::to_string(cap_) + " steps");
      std::vector<Conf> next;
      for (const auto &c : frontier) {
        for (int ti : edges_[c.q]) {
          const auto &t = a_.transitions[ti];
          auto emit = [&](Conf n) {
            canon(n);
            if (seen.insert(key(n)).second) {
              observe(n);
              next.push_back(n);
              all.push_back(std::move(n));
            }
          };
          switch (t.label.kind) {
          case Label::Kind::Eps:
            emit({t.to, c.regs});
            break;
          case Label::Kind::Star: {
            auto go = [&](const Name &n) {
              Conf m{t.to, c.regs};
              bool rel = relevant(n);
              if (rel)
                for (auto &r : m.regs)
                  add_hist(r.hist, n);
              m.regs.push_back({n, rel ? std::vector<Name>{n}
                                       : std::vector<Name>{}});
              emit(std::move(m));
            };
            for (const auto &n : cands)
              if (!in_cvs(c, n))
                go(n);
            go(fresh_candidate(c));
            break;
          }
          case Label::Kind::Close: {
            if (c.regs.empty())
              break;
            Conf m{t.to, c.regs};
            Name top = m.regs.back().cv;
            m.regs.pop_back();
            std::size_t i = static_cast<std::size_t>(t.label.index);
            if (i <= m.regs.size()) {
              m.regs[i - 1].cv = top;
              if (stats_)
                stats_->close_below_top = true;
            }
            emit(std::move(m));
            break;
          }
          default:
            break;
          }
        }
      }
      frontier = std::move(next);
    }
    return all;
  }

  std::vector<Conf> consume(const std::vector<Conf> &cs, const Symbol &x) {
    std::vector<Conf> out;
    const Name *n = std::get_if<Name>(&x);
    const Letter *l = std::get_if<Letter>(&x);
    for (const auto &c : cs) {
      for (int ti : edges_[c.q]) {
        const auto &t = a_.transitions[ti];
        switch (t.label.kind) {
        case Label::Kind::Letter:
          if (l && l->sym == t.label.letter)
            out.push_back({t.to, c.regs});
          break;
        case Label::Kind::Reg:
          if (n && static_cast<std::size_t>(t.label.index) <= c.regs.size() &&
              c.regs[t.label.index - 1].cv == *n)
            out.push_back({t.to, c.regs});
          break;
        case Label::Kind::Under: {
          if (!n || static_cast<std::size_t>(t.label.index) > c.regs.size())
            break;
          if (in_cvs(c, *n) || has(c.regs[t.label.index - 1].hist, *n))
            break;
          Conf m{t.to, c.regs};
          if (relevant(*n))
            for (auto &r : m.regs)
              add_hist(r.hist, *n);
          m.regs[t.label.index - 1].cv = *n;
          out.push_back(std::move(m));
          break;
        }
        default:
          break;
        }
      }
    }
    return out;
  }

  bool accepting(const std::vector<Conf> &cs) const {
    for (const auto &c : cs)
      if (a_.states[c.q].final && c.regs.empty())
        return true;
    return false;
  }

private:
  const Cda &a_;
  std::vector<std::vector<int>> edges_;
  RunStats *stats_;
  NameSet rel_;
  std::uint32_t base_ = 0;
  std::size_t cap_ = 0;
};

void require_valid(const Cda &a) {
  auto rep = validate(a);
  if (!rep.ok())
    throw InvalidAutomaton(rep.str());
}

} // namespace

bool accept(const Cda &a, const Word &w, RunStats *stats) {
  require_valid(a);
  auto names = word_names(w);
  Engine eng(a, names, stats);
  // star candidates: names of the unread suffix
  std::vector<std::vector<Name>> suffix(w.size() + 1);
  for (std::size_t i = w.size(); i-- > 0;) {
    suffix[i] = suffix[i + 1];
    if (auto n = std::get_if<Name>(&w[i]))
      if (std::find(suffix[i].begin(), suffix[i].end(), *n) == suffix[i].end())
        suffix[i].push_back(*n);
  }
  auto cur = eng.closure({Conf{a.initial, {}}}, suffix[0]);
  for (std::size_t i = 0; i < w.size() && !cur.empty(); ++i)
    cur = eng.closure(eng.consume(cur, w[i]), suffix[i + 1]);
  return eng.accepting(cur);
}

std::set<Word> enumerate(const Cda &a, const std::vector<Name> &pool,
                         std::size_t maxlen,
                         const std::set<std::string> &alphabet) {
  require_valid(a);
  {
    NameSet s(pool.begin(), pool.end());
    if (s.size() != pool.size())
      throw std::invalid_argument("enumerate: pool has repeated names");
  }
  Engine eng(a, pool, nullptr);
  std::vector<Symbol> symbols;
  for (const auto &l : alphabet.empty() ? a.letters() : alphabet)
    symbols.emplace_back(Letter{l});
  for (const auto &n : pool)
    symbols.emplace_back(n);

  std::set<Word> out;
  Word w;
  std::function<void(const std::vector<Conf> &)> dfs =
      [&](const std::vector<Conf> &cur) {
        if (eng.accepting(cur))
          out.insert(w);
        if (w.size() == maxlen)
          return;
        for (const auto &x : symbols) {
          auto next = eng.closure(eng.consume(cur, x), pool);
          if (next.empty())
            continue;
          w.push_back(x);
          dfs(next);
          w.pop_back();
        }
      };
  dfs(eng.closure({Conf{a.initial, {}}}, pool));
  return out;
}

bool word_less(const Word &a, const Word &b) {
  if (a.size() != b.size())
    return a.size() < b.size();
  return a < b;
}

std::optional<Word> equiv_bounded(const Cda &a, const Cda &b,
                                  const std::vector<Name> &pool,
                                  std::size_t maxlen) {
  auto letters = a.letters();
  for (const auto &l : b.letters())
    letters.insert(l);
  if (letters.empty())
    letters.insert("a"); // any letter: both languages reject it
  auto la = enumerate(a, pool, maxlen, letters);
  auto lb = enumerate(b, pool, maxlen, letters);
  std::optional<Word> best;
  auto consider = [&](const Word &w) {
    if (!best || word_less(w, *best))
      best = w;
  };
  for (const auto &w : la)
    if (!lb.count(w))
      consider(w);
  for (const auto &w : lb)
    if (!la.count(w))
      consider(w);
  return best;
}

// --------------------------------------------------- closure operations

namespace {

// Copies `src` into `dst` with prefixed ids; returns the index offset.
int embed(Cda &dst, const Cda &src, const std::string &prefix,
          bool keep_final) {
  int off = static_cast<int>(dst.states.size());
  for (const auto &s : src.states)
    dst.add_state(prefix + s.id, s.regs, keep_final && s.final);
  for (const auto &t : src.transitions)
    dst.add(t.from + off, t.label, t.to + off);
  return off;
}

} // namespace

Cda union_cda(const Cda &a, const Cda &b) {
  Cda u;
  u.initial = u.add_state("u", 0, false);
  int oa = embed(u, a, "L.", true);
  int ob = embed(u, b, "R.", true);
  u.add(u.initial, Label::eps(), a.initial + oa);
  u.add(u.initial, Label::eps(), b.initial + ob);
  return u;
}

Cda concat_cda(const Cda &a, const Cda &b) {
  Cda c;
  int oa = embed(c, a, "L.", false);
  int ob = embed(c, b, "R.", true);
  c.initial = a.initial + oa;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    if (a.states[i].final)
      c.add(static_cast<int>(i) + oa, Label::eps(), b.initial + ob);
  return c;
}

Cda star_cda(const Cda &a) {
  Cda s;
  s.initial = s.add_state("s", 0, true);
  int oa = embed(s, a, "B.", false);
  s.add(s.initial, Label::eps(), a.initial + oa);
  for (std::size_t i = 0; i < a.states.size(); ++i)
    if (a.states[i].final)
      s.add(static_cast<int>(i) + oa, Label::eps(), s.initial);
  return s;
}

// ------------------------------------------------------ serialisation

namespace {

const char *kind_str(Label::Kind k) {
  switch (k) {
  case Label::Kind::Eps:
    return "eps";
  case Label::Kind::Letter:
    return "letter";
  case Label::Kind::Reg:
    return "reg";
  case Label::Kind::Star:
    return "star";
  case Label::Kind::Under:
    return "under";
  case Label::Kind::Close:
    return "close";
  }
  return "?";
}

} // namespace

std::string to_json(const Cda &a) {
  using nlohmann::json;
  json j;
  j["states"] = json::array();
  for (const auto &s : a.states)
    j["states"].push_back({{"id", s.id}, {"regs", s.regs}, {"final", s.final}});
  j["initial"] = a.states.empty() ? "" : a.states[a.initial].id;
  j["transitions"] = json::array();
  for (const auto &t : a.transitions) {
    json l = {{"kind", kind_str(t.label.kind)}};
    if (t.label.kind == Label::Kind::Letter)
      l["letter"] = t.label.letter;
    if (t.label.kind == Label::Kind::Reg || t.label.kind == Label::Kind::Under ||
        t.label.kind == Label::Kind::Close)
      l["index"] = t.label.index;
    j["transitions"].push_back({{"from", a.states[t.from].id},
                                {"label", l},
                                {"to", a.states[t.to].id}});
  }
  return j.dump(2) + "\n";
}

Cda from_json(const std::string &text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  auto need = [](bool ok, const std::string &msg) {
    if (!ok)
      throw SchemaError("schema: " + msg);
  };
  need(j.is_object(), "top level must be an object");
  need(j.contains("states") && j["states"].is_array(), "missing states array");
  need(j.contains("initial") && j["initial"].is_string(),
       "missing initial state id");
  need(j.contains("transitions") && j["transitions"].is_array(),
       "missing transitions array");
  Cda a;
  for (const auto &s : j["states"]) {
    need(s.is_object() && s.contains("id") && s["id"].is_string(),
         "state without string id");
    need(s.contains("regs") && s["regs"].is_number_integer(),
         "state " + s["id"].get<std::string>() + " without integer regs");
    need(s.contains("final") && s["final"].is_boolean(),
         "state " + s["id"].get<std::string>() + " without boolean final");
    auto id = s["id"].get<std::string>();
    need(a.find(id) < 0, "duplicate state id " + id);
    a.add_state(id, s["regs"].get<int>(), s["final"].get<bool>());
  }
  a.initial = a.find(j["initial"].get<std::string>());
  need(a.initial >= 0, "initial state is not declared");
  for (const auto &t : j["transitions"]) {
    need(t.is_object() && t.contains("from") && t["from"].is_string() &&
             t.contains("to") && t["to"].is_string(),
         "transition without from/to");
    int from = a.find(t["from"].get<std::string>());
    int to = a.find(t["to"].get<std::string>());
    need(from >= 0 && to >= 0, "transition between undeclared states");
    need(t.contains("label") && t["label"].is_object() &&
             t["label"].contains("kind") && t["label"]["kind"].is_string(),
         "transition without label kind");
    const auto &l = t["label"];
    auto kind = l["kind"].get<std::string>();
    auto index = [&]() {
      need(l.contains("index") && l["index"].is_number_integer(),
           "label " + kind + " requires an integer index");
      return l["index"].get<int>();
    };
    Label lab;
    if (kind == "eps")
      lab = Label::eps();
    else if (kind == "letter") {
      need(l.contains("letter") && l["letter"].is_string(),
           "letter label without letter");
      lab = Label::sym(l["letter"].get<std::string>());
    } else if (kind == "reg")
      lab = Label::reg(index());
    else if (kind == "star")
      lab = Label::star();
    else if (kind == "under")
      lab = Label::under(index());
    else if (kind == "close")
      lab = Label::close(index());
    else
      need(false, "unknown label kind " + kind);
    a.add(from, lab, to);
  }
  return a;
}

std::string to_dot(const Cda &a) {
  std::ostringstream os;
  os << "digraph cda {\n  rankdir=LR;\n";
  std::map<int, std::vector<int>> layers;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    layers[a.states[i].regs].push_back(static_cast<int>(i));
  for (const auto &[layer, qs] : layers) {
    os << "  subgraph layer" << layer << " {\n    rank=same;\n";
    for (int q : qs) {
      const auto &s = a.states[q];
      os << "    \"" << s.id << "\" [shape="
         << (s.final ? "doublecircle" : "circle") << ", label=\"" << s.id
         << "\\n" << s.regs << "\"" << (q == a.initial ? ", style=bold" : "")
         << "];\n";
    }
    os << "  }\n";
  }
  for (const auto &t : a.transitions)
    os << "  \"" << a.states[t.from].id << "\" -> \"" << a.states[t.to].id
       << "\" [label=\"" << t.label.str() << "\"];\n";
  os << "}\n";
  return os.str();
}

Word parse_word(const std::string &text) {
  std::istringstream is(text);
  Word w;
  std::string tok;
  while (is >> tok) {
    if (tok[0] == '$') {
      if (tok.size() == 1)
        throw std::invalid_argument("empty name token '$'");
      w.emplace_back(Name::user(tok.substr(1)));
    } else {
      w.emplace_back(Letter{tok});
    }
  }
  return w;
}

} // namespace nomre
