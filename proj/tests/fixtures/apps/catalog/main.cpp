#include <iostream>

#include "Index.hpp"

int main() {
  ext::MapStore store({{"a1", 1}, {"a2", 2}, {"b1", 7}, {"b2", 8}, {"b3", 9}});
  catalog::Index index(&store);
  std::vector<std::string> seen;
  for (const std::string prefix : {"a", "b", "z"}) {
    auto m = index.build(prefix, seen);
    std::cout << prefix << ":";
    for (const auto& [k, v] : m) std::cout << " " << k << "=" << v;
    std::cout << " seen=" << seen.size() << "\n";
  }
  for (const auto& k : index.missing({"a1", "q", "b3", "zz"})) std::cout << "missing " << k << "\n";
  return 0;
}
