#pragma once

#include <string>

inline std::string corpus(const std::string &rel) {
  return std::string(NOMRE_SOURCE_DIR) + "/corpus/" + rel;
}
