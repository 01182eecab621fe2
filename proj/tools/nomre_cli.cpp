// nomre: command-line front end for the nominal regular expression library.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "nomre/cda.hpp"
#include "nomre/compiler.hpp"
#include "nomre/extractor.hpp"
#include "nomre/gen.hpp"
#include "nomre/io.hpp"
#include "nomre/langcalc.hpp"
#include "nomre/nre.hpp"

using namespace nomre;

namespace {

enum Exit { kOk = 0, kReject = 1, kUsage = 2, kParse = 3, kInvalid = 4, kLimit = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string letters;
  std::string pool = "x,y,z";
  std::size_t maxlen = 5;
  int star_bound = -1;
  std::uint64_t seed = 7;
  std::string format = "text";
};

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep))
    if (!tok.empty())
      out.push_back(tok);
  return out;
}

Alphabet letters_arg(const Config &c) {
  auto v = split(c.letters, ',');
  return {v.begin(), v.end()};
}

std::vector<Name> pool_arg(const Config &c) {
  std::vector<Name> pool;
  for (auto s : split(c.pool, ',')) {
    if (s[0] == '$')
      s.erase(0, 1);
    if (s.empty())
      throw UsageError("empty name in --pool");
    Name n = Name::user(s);
    if (std::find(pool.begin(), pool.end(), n) != pool.end())
      throw UsageError("repeated name in --pool: " + s);
    pool.push_back(n);
  }
  return pool;
}

bool is_json(const std::string &path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

Cda load_automaton(const std::string &path, const Config &c) {
  if (is_json(path))
    return load_cda(path);
  return compile(load_nre(path, letters_arg(c)));
}

Word word_arg(const std::vector<std::string> &tokens) {
  std::string text;
  for (const auto &t : tokens)
    text += t + " ";
  try {
    return parse_word(text);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
}

std::string cda_text(const Cda &a) {
  std::ostringstream os;
  auto info = class_of(a);
  os << "class: " << class_name(info.cls)
     << (info.deterministic ? ", deterministic" : "") << "\n";
  os << "initial: " << a.states[a.initial].id << "\n";
  for (const auto &s : a.states)
    os << "state " << s.id << " regs=" << s.regs << (s.final ? " final" : "")
       << "\n";
  for (const auto &t : a.transitions)
    os << a.states[t.from].id << " --" << t.label.str() << "--> "
       << a.states[t.to].id << "\n";
  return os.str();
}

void emit(const std::string &text, const std::string &out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f || !(f << text))
    throw IoError("cannot write " + out);
}

std::string render_cda(const Cda &a, const std::string &format) {
  if (format == "json")
    return to_json(a) + "\n";
  if (format == "dot")
    return to_dot(a);
  return cda_text(a);
}

void print_words(const std::set<Word> &ws) {
  std::vector<Word> v(ws.begin(), ws.end());
  std::sort(v.begin(), v.end(), word_less);
  for (const auto &w : v)
    std::cout << (w.empty() ? "eps" : word_str(w)) << "\n";
}

int cmd_check(const std::string &path, const Config &c) {
  if (is_json(path)) {
    Cda a = load_cda(path);
    auto rep = validate(a);
    if (!rep.ok()) {
      std::cout << "invalid automaton\n" << rep.str() << "\n";
      return kInvalid;
    }
    auto info = class_of(a);
    std::cout << "class: " << class_name(info.cls)
              << (info.deterministic ? ", deterministic" : ", nondeterministic")
              << "\n";
    return kOk;
  }
  Nre e = load_nre(path, letters_arg(c));
  auto rep = check_wellformed(e, true);
  std::cout << "class: " << class_name(classify(e)) << ", "
            << (rep.ok() ? "well-formed" : "ill-formed") << "\n";
  if (!rep.ok()) {
    std::cout << rep.str() << "\n";
    return kInvalid;
  }
  return kOk;
}

int cmd_derive(const std::string &path, const Config &c) {
  Nre e = load_nre(path, letters_arg(c));
  auto rep = check_wellformed(e, true);
  if (!rep.ok())
    throw CompileError(rep.str());
  int bound = c.star_bound < 0 ? static_cast<int>(c.maxlen) + 1 : c.star_bound;
  std::cout << derivation_report(e, bound);
  return kOk;
}

int cmd_fuzz(std::size_t count, const Config &c) {
  auto pool = pool_arg(c);
  GenOptions g;
  auto letters = letters_arg(c);
  if (!letters.empty())
    g.letters.assign(letters.begin(), letters.end());
  int bad = 0;
  for (const auto &e : random_corpus(c.seed, count, g)) {
    auto lhs = language_enumerate(e, pool, c.maxlen, c.star_bound);
    auto rhs = enumerate(compile(e), pool, c.maxlen);
    if (lhs == rhs)
      continue;
    ++bad;
    std::cout << "mismatch: " << render(e) << "\n";
  }
  std::cout << count - bad << " of " << count << " agree\n";
  return bad ? kReject : kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"nominal regular expressions and chronicle deallocating automata"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--letters", cfg.letters, "comma-separated alphabet");
  app.add_option("--pool", cfg.pool, "comma-separated name pool");
  app.add_option("--maxlen", cfg.maxlen, "maximum word length");
  app.add_option("--star-bound", cfg.star_bound,
                 "star unfoldings (-1: until saturation)");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "dot", "text"}));

  std::string file, other, out;
  std::vector<std::string> word;
  std::size_t count = 200;
  std::string via = "cda";
  std::function<int()> run;

  auto *check = app.add_subcommand("check", "class and well-formedness");
  check->add_option("file", file)->required();
  check->callback([&] { run = [&] { return cmd_check(file, cfg); }; });

  auto *comp = app.add_subcommand("compile", "expression to automaton");
  comp->add_option("file", file)->required();
  comp->add_option("-o,--output", out);
  comp->callback([&] {
    run = [&] {
      std::string f = cfg.format == "text" && !out.empty() ? "json" : cfg.format;
      emit(render_cda(compile(load_nre(file, letters_arg(cfg))), f), out);
      return kOk;
    };
  });

  auto *acc = app.add_subcommand("accept", "membership of a word");
  acc->add_option("automaton", file)->required();
  acc->add_option("word", word);
  acc->callback([&] {
    run = [&] {
      bool ok = accept(load_automaton(file, cfg), word_arg(word));
      std::cout << (ok ? "accept" : "reject") << "\n";
      return ok ? kOk : kReject;
    };
  });

  auto *en = app.add_subcommand("enumerate", "bounded language");
  en->add_option("file", file)->required();
  en->add_option("--via", via, "cda or lngc")
      ->check(CLI::IsMember({"cda", "lngc"}));
  en->callback([&] {
    run = [&] {
      auto pool = pool_arg(cfg);
      if (via == "lngc") {
        if (is_json(file))
          throw UsageError("--via lngc needs an expression file");
        print_words(language_enumerate(load_nre(file, letters_arg(cfg)), pool,
                                       cfg.maxlen, cfg.star_bound));
      } else {
        auto letters = letters_arg(cfg);
        print_words(enumerate(load_automaton(file, cfg), pool, cfg.maxlen,
                              {letters.begin(), letters.end()}));
      }
      return kOk;
    };
  });

  auto *eq = app.add_subcommand("equiv", "bounded language equivalence");
  eq->add_option("left", file)->required();
  eq->add_option("right", other)->required();
  eq->callback([&] {
    run = [&] {
      auto cex = equiv_bounded(load_automaton(file, cfg),
                               load_automaton(other, cfg), pool_arg(cfg),
                               cfg.maxlen);
      if (!cex) {
        std::cout << "equivalent (bounded)\n";
        return kOk;
      }
      std::cout << "counterexample: " << (cex->empty() ? "eps" : word_str(*cex))
                << "\n";
      return kReject;
    };
  });

  auto *ex = app.add_subcommand("extract", "automaton to expression");
  ex->add_option("automaton", file)->required();
  ex->callback([&] {
    run = [&] {
      std::cout << render(extract_expr(load_automaton(file, cfg))) << "\n";
      return kOk;
    };
  });

  auto *det = app.add_subcommand("determinize", "layerwise subset construction");
  det->add_option("automaton", file)->required();
  det->add_option("-o,--output", out);
  det->callback([&] {
    run = [&] {
      std::string f = cfg.format == "text" ? "json" : cfg.format;
      emit(render_cda(determinize_layers(load_automaton(file, cfg)), f), out);
      return kOk;
    };
  });

  auto *der = app.add_subcommand("derive", "context and language derivations");
  der->add_option("file", file)->required();
  der->callback([&] { run = [&] { return cmd_derive(file, cfg); }; });

  auto *dot = app.add_subcommand("dot", "graphviz export");
  dot->add_option("automaton", file)->required();
  dot->add_option("-o,--output", out);
  dot->callback([&] {
    run = [&] {
      emit(to_dot(load_automaton(file, cfg)), out);
      return kOk;
    };
  });

  auto *fz = app.add_subcommand("fuzz", "random differential test");
  fz->add_option("--count", count);
  fz->callback([&] { run = [&] { return cmd_fuzz(count, cfg); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return run();
  } catch (const UsageError &e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError &e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const SchemaError &e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kParse;
  } catch (const IoError &e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kParse;
  } catch (const InvalidAutomaton &e) {
    std::cerr << "invalid automaton: " << e.what() << "\n";
    return kInvalid;
  } catch (const CompileError &e) {
    std::cerr << "invalid expression: " << e.what() << "\n";
    return kInvalid;
  } catch (const CalcError &e) {
    std::cerr << "calculus error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ResourceLimit &e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kLimit;
  }
}
