#include "nomre/io.hpp"

#include <fstream>
#include <sstream>

namespace nomre {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

NreSource read_nre_source(const std::string &path) {
  std::istringstream in(read_file(path));
  NreSource src;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind('#', 0) == 0) {
      auto at = line.find("letters:");
      if (at != std::string::npos) {
        std::istringstream ls(line.substr(at + 8));
        src.letters.clear();
        for (std::string l; ls >> l;)
          src.letters.insert(l);
      }
      continue;
    }
    src.text += line + '\n';
  }
  return src;
}

Nre load_nre(const std::string &path, const Alphabet &letters) {
  NreSource src = read_nre_source(path);
  return parse(src.text, letters.empty() ? src.letters : letters);
}

Cda load_cda(const std::string &path) { return from_json(read_file(path)); }

WordList read_word_list(const std::string &path) {
  std::istringstream in(read_file(path));
  WordList wl;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#')
      continue;
    std::istringstream ls(line);
    std::string verdict;
    ls >> verdict;
    std::string rest;
    std::getline(ls, rest);
    if (verdict == "accept")
      wl.accept.push_back(parse_word(rest));
    else if (verdict == "reject")
      wl.reject.push_back(parse_word(rest));
    else
      throw IoError(path + ":" + std::to_string(n) +
                    ": expected accept or reject");
  }
  return wl;
}

} // namespace nomre
