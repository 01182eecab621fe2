#ifndef NOMRE_CDA_HPP
#define NOMRE_CDA_HPP

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nomre/names.hpp"

namespace nomre {

struct Label {
  enum class Kind { Eps, Letter, Reg, Star, Under, Close };
  Kind kind = Kind::Eps;
  std::string letter; // Letter only
  int index = 0;      // Reg, Under, Close (1-based register)

  static Label eps() { return {Kind::Eps, {}, 0}; }
  static Label sym(std::string s) { return {Kind::Letter, std::move(s), 0}; }
  static Label reg(int i) { return {Kind::Reg, {}, i}; }
  static Label star() { return {Kind::Star, {}, 0}; }
  static Label under(int i) { return {Kind::Under, {}, i}; }
  static Label close(int i) { return {Kind::Close, {}, i}; }

  /// Register-count change imposed by the label.
  int delta() const;
  /// `eps`, the letter, `r<i>`, `*`, `u<i>`, `close<i>`.
  std::string str() const;

  friend bool operator==(const Label &, const Label &) = default;
  friend auto operator<=>(const Label &, const Label &) = default;
};

struct State {
  std::string id;
  int regs = 0;
  bool final = false;

  friend bool operator==(const State &, const State &) = default;
};

struct Transition {
  int from = 0;
  Label label;
  int to = 0;

  friend bool operator==(const Transition &, const Transition &) = default;
};

/// Chronicle deallocating automaton.  States are addressed by position.
struct Cda {
  std::vector<State> states;
  int initial = 0;
  std::vector<Transition> transitions;

  int add_state(int regs, bool final = false);
  int add_state(std::string id, int regs, bool final);
  void add(int from, Label l, int to) { transitions.push_back({from, l, to}); }

  int find(const std::string &id) const; // -1 if absent
  int max_regs() const;
  std::set<std::string> letters() const;
  /// transitions grouped by source state
  std::vector<std::vector<int>> out_edges() const;

  friend bool operator==(const Cda &, const Cda &) = default;
};

class ResourceLimit : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidAutomaton : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed automaton JSON (syntax or schema).
class SchemaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

ValidationReport validate(const Cda &a);

enum class CdaClass { CDA, CA, DA, A };
const char *class_name(CdaClass c);

struct CdaClassInfo {
  CdaClass cls;
  /// No ε-edges and at most one successor per (state, label).
  bool deterministic;
};

/// Throws InvalidAutomaton when validate fails.
CdaClassInfo class_of(const Cda &a);

struct Configuration {
  int state = 0;
  std::size_t pos = 0;
  ExtantChronicle extant;

  friend bool operator==(const Configuration &,
                         const Configuration &) = default;
};

/// One move of the run relation, with full (uncanonicalised) chronicles.  Star moves
/// branch over the unread names of w outside hcv(E) and over one canonical
/// fresh name.
std::vector<Configuration> step(const Cda &a, const Configuration &c,
                                const Word &w);

struct RunStats {
  std::size_t configurations = 0;
  bool register_discipline = true;  // |E| = |q| on every visited config
  bool distinct_cvs = true;         // hcv pairwise distinct throughout
  bool close_below_top = false;     // some Close(i) with i < |q| executed
};

bool accept(const Cda &a, const Word &w, RunStats *stats = nullptr);

/// Words over letters u pool of length <= maxlen accepted by a.  When
/// `alphabet` is empty the automaton's own letters are used.
std::set<Word> enumerate(const Cda &a, const std::vector<Name> &pool,
                         std::size_t maxlen,
                         const std::set<std::string> &alphabet = {});

/// Length-then-lexicographic order on words.
bool word_less(const Word &a, const Word &b);

/// Least word on which the bounded languages differ.
std::optional<Word> equiv_bounded(const Cda &a, const Cda &b,
                                  const std::vector<Name> &pool,
                                  std::size_t maxlen);

/// Disjoint union with a fresh initial state and ε-edges to both initials.
Cda union_cda(const Cda &a, const Cda &b);
Cda concat_cda(const Cda &a, const Cda &b);
Cda star_cda(const Cda &a);

std::string to_json(const Cda &a);
Cda from_json(const std::string &text);
std::string to_dot(const Cda &a);

/// Parses whitespace-separated tokens: `$x` is a name, anything else a letter.
Word parse_word(const std::string &text);

} // namespace nomre

#endif
