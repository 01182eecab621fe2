#include "nomre/names.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace nomre {

namespace {

// Spellings live in a deque so the pointers held by Name stay valid.
struct Interner {
  std::mutex mu;
  std::deque<std::string> spellings;
  std::unordered_map<std::string, std::uint32_t> ids;

  std::pair<std::uint32_t, const std::string *> intern(std::string_view s) {
    std::lock_guard lock(mu);
    auto it = ids.find(std::string(s));
    if (it != ids.end())
      return {it->second, &spellings[it->second]};
    auto id = static_cast<std::uint32_t>(spellings.size());
    spellings.emplace_back(s);
    ids.emplace(spellings.back(), id);
    return {id, &spellings.back()};
  }
};

Interner &interner() {
  static Interner in;
  return in;
}

} // namespace

Name Name::user(std::string_view spelling) {
  if (spelling.empty())
    throw std::invalid_argument("empty name spelling");
  auto [id, sp] = interner().intern(spelling);
  return Name(Kind::User, id, sp);
}

std::string_view Name::spelling() const {
  return sp_ ? std::string_view(*sp_) : std::string_view();
}

std::string Name::str() const {
  switch (kind_) {
  case Kind::User:
    return "$" + std::string(spelling());
  case Kind::Fresh:
    return "~" + std::to_string(id_);
  case Kind::Placeholder:
    return "?" + std::to_string(id_);
  }
  return {};
}

std::strong_ordering operator<=>(const Name &a, const Name &b) {
  if (a.kind_ != b.kind_)
    return a.kind_ <=> b.kind_;
  if (a.id_ == b.id_)
    return std::strong_ordering::equal;
  if (a.kind_ == Name::Kind::User)
    return a.sp_->compare(*b.sp_) < 0 ? std::strong_ordering::less
                                      : std::strong_ordering::greater;
  return a.id_ <=> b.id_;
}

std::ostream &operator<<(std::ostream &os, const Name &n) {
  return os << n.str();
}

std::string symbol_str(const Symbol &s) {
  if (auto l = std::get_if<Letter>(&s))
    return l->sym;
  return std::get<Name>(s).str();
}

std::string word_str(const Word &w) {
  std::string out;
  for (const auto &s : w) {
    if (!out.empty())
      out += ' ';
    out += symbol_str(s);
  }
  return out;
}

std::vector<Name> word_names(const Word &w) {
  std::vector<Name> out;
  for (const auto &s : w) {
    if (auto n = std::get_if<Name>(&s)) {
      if (std::find(out.begin(), out.end(), *n) == out.end())
        out.push_back(*n);
    }
  }
  return out;
}

Name canonical_fresh(const NameSet &avoid) {
  std::uint32_t i = 0;
  while (avoid.count(Name::fresh(i)))
    ++i;
  return Name::fresh(i);
}

// ---------------------------------------------------------------- Perm

Perm Perm::transpose(Name a, Name b) {
  Perm p;
  if (a != b) {
    p.map_[a] = b;
    p.map_[b] = a;
  }
  return p;
}

Perm Perm::from_lists(std::span<const Name> from, std::span<const Name> to) {
  if (from.size() != to.size())
    throw std::invalid_argument("perm_from_lists: length mismatch");
  NameSet dom(from.begin(), from.end());
  NameSet cod(to.begin(), to.end());
  if (dom.size() != from.size() || cod.size() != to.size())
    throw std::invalid_argument("perm_from_lists: repeated element");

  std::map<Name, Name> m;
  for (std::size_t i = 0; i < from.size(); ++i)
    m[from[i]] = to[i];
  std::vector<Name> no_image, no_preimage;
  for (const auto &n : cod)
    if (!dom.count(n))
      no_image.push_back(n);
  for (const auto &n : dom)
    if (!cod.count(n))
      no_preimage.push_back(n);
  // both sets have |N u M| - |N| elements and are already name-ordered
  for (std::size_t i = 0; i < no_image.size(); ++i)
    m[no_image[i]] = no_preimage[i];

  Perm p;
  for (const auto &[a, b] : m)
    if (a != b)
      p.map_[a] = b;
  return p;
}

Name Perm::operator()(const Name &n) const {
  auto it = map_.find(n);
  return it == map_.end() ? n : it->second;
}

Perm Perm::inverse() const {
  Perm p;
  for (const auto &[a, b] : map_)
    p.map_[b] = a;
  return p;
}

Perm Perm::compose(const Perm &other) const {
  Perm p;
  NameSet sup = support();
  for (const auto &[a, b] : other.map_)
    sup.insert(a);
  for (const auto &n : sup) {
    Name img = (*this)(other(n));
    if (img != n)
      p.map_[n] = img;
  }
  return p;
}

NameSet Perm::support() const {
  NameSet s;
  for (const auto &[a, b] : map_)
    s.insert(a);
  return s;
}

Word apply_perm_word(const Perm &p, const Word &w) {
  Word out;
  out.reserve(w.size());
  for (const auto &s : w) {
    if (auto n = std::get_if<Name>(&s))
      out.emplace_back(p(*n));
    else
      out.push_back(s);
  }
  return out;
}

std::vector<Name> apply_perm_names(const Perm &p, std::span<const Name> ns) {
  std::vector<Name> out;
  out.reserve(ns.size());
  for (const auto &n : ns)
    out.push_back(p(n));
  return out;
}

// ----------------------------------------------------------- Chronicle

Chronicle::Chronicle(std::vector<Name> h, Name current)
    : history(std::move(h)), cv(current) {}

Chronicle Chronicle::extend(std::span<const Name> t) const {
  Chronicle c = *this;
  c.history.insert(c.history.end(), t.begin(), t.end());
  return c;
}

Chronicle Chronicle::extend(const Name &n) const {
  Chronicle c = *this;
  c.history.push_back(n);
  return c;
}

Chronicle Chronicle::remove(std::span<const Name> t) const {
  if (std::find(t.begin(), t.end(), cv) != t.end())
    throw std::invalid_argument("chronicle_delete: cannot delete current value " +
                                cv.str());
  Chronicle c;
  c.cv = cv;
  for (const auto &n : history)
    if (std::find(t.begin(), t.end(), n) == t.end())
      c.history.push_back(n);
  return c;
}

bool Chronicle::contains(const Name &n) const {
  return std::find(history.begin(), history.end(), n) != history.end();
}

Chronicle Chronicle::permute(const Perm &p) const {
  return Chronicle(apply_perm_names(p, history), p(cv));
}

Chronicle Chronicle::dedup() const {
  Chronicle c;
  c.cv = cv;
  for (const auto &n : history)
    if (!c.contains(n))
      c.history.push_back(n);
  return c;
}

// ------------------------------------------------------ ExtantChronicle

ExtantChronicle::ExtantChronicle(std::vector<Chronicle> entries)
    : entries_(std::move(entries)) {}

ExtantChronicle ExtantChronicle::natural(std::span<const Name> context) {
  std::vector<Chronicle> es;
  for (std::size_t i = 0; i < context.size(); ++i)
    es.emplace_back(std::vector<Name>(context.begin() + i, context.end()),
                    context[i]);
  return ExtantChronicle(std::move(es));
}

std::vector<Name> ExtantChronicle::hcv() const {
  std::vector<Name> out;
  out.reserve(entries_.size());
  for (const auto &c : entries_)
    out.push_back(c.cv);
  return out;
}

ExtantChronicle ExtantChronicle::extend(std::span<const Name> t) const {
  std::vector<Chronicle> es;
  for (const auto &c : entries_)
    es.push_back(c.extend(t));
  return ExtantChronicle(std::move(es));
}

ExtantChronicle ExtantChronicle::extend(const Name &n) const {
  return extend(std::span<const Name>(&n, 1));
}

ExtantChronicle ExtantChronicle::remove(std::span<const Name> t) const {
  std::vector<Chronicle> es;
  for (const auto &c : entries_)
    es.push_back(c.remove(t));
  return ExtantChronicle(std::move(es));
}

ExtantChronicle ExtantChronicle::append(const ExtantChronicle &other) const {
  auto es = entries_;
  es.insert(es.end(), other.entries_.begin(), other.entries_.end());
  return ExtantChronicle(std::move(es));
}

ExtantChronicle ExtantChronicle::push(Chronicle c) const {
  auto es = entries_;
  es.push_back(std::move(c));
  return ExtantChronicle(std::move(es));
}

ExtantChronicle ExtantChronicle::pop() const {
  if (entries_.empty())
    throw std::logic_error("pop from empty extant chronicle");
  auto es = entries_;
  es.pop_back();
  return ExtantChronicle(std::move(es));
}

ExtantChronicle ExtantChronicle::permute(const Perm &p) const {
  std::vector<Chronicle> es;
  for (const auto &c : entries_)
    es.push_back(c.permute(p));
  return ExtantChronicle(std::move(es));
}

ExtantChronicle ExtantChronicle::with_cv(std::size_t i, Name n) const {
  auto es = entries_;
  es.at(i).cv = n;
  return ExtantChronicle(std::move(es));
}

ExtantChronicle ExtantChronicle::dedup() const {
  std::vector<Chronicle> es;
  for (const auto &c : entries_)
    es.push_back(c.dedup());
  return ExtantChronicle(std::move(es));
}

bool ExtantChronicle::distinct_cvs() const {
  auto h = hcv();
  std::sort(h.begin(), h.end());
  return std::adjacent_find(h.begin(), h.end()) == h.end();
}

NameSet ExtantChronicle::names() const {
  NameSet s;
  for (const auto &c : entries_) {
    s.insert(c.cv);
    s.insert(c.history.begin(), c.history.end());
  }
  return s;
}

std::string names_str(std::span<const Name> ns) {
  std::string out;
  for (const auto &n : ns) {
    if (!out.empty())
      out += ' ';
    out += n.str();
  }
  return out;
}

std::string chronicle_str(const Chronicle &c) {
  return c.cv.str() + "♮(" + names_str(c.history) + ")";
}

std::string extant_str(const ExtantChronicle &e) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i)
      os << ", ";
    os << chronicle_str(e[i]);
  }
  os << ']';
  return os.str();
}

} // namespace nomre
