#ifndef NOMRE_IO_HPP
#define NOMRE_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "nomre/cda.hpp"
#include "nomre/nre.hpp"

namespace nomre {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path);

/// Expression file: `#` lines are comments, except `# letters: a b d`,
/// which declares the alphabet.  Without it the alphabet is {a, b}.
struct NreSource {
  std::string text;
  Alphabet letters{"a", "b"};
};

NreSource read_nre_source(const std::string &path);

/// Parses an expression file; `letters` overrides the declared alphabet
/// when non-empty.
Nre load_nre(const std::string &path, const Alphabet &letters = {});

Cda load_cda(const std::string &path);

/// Lines `accept <word>` / `reject <word>`; `#` lines and blanks ignored.
/// An empty word is written as `accept` alone.
struct WordList {
  std::vector<Word> accept, reject;
};

WordList read_word_list(const std::string &path);

} // namespace nomre

#endif
