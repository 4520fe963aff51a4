#include <iostream>

#include "Workers.hpp"

int main() {
  ext::TickingClock clock(1000);
  nesting::Outer outer(&clock);
  for (int x : {1, 2, 5}) std::cout << "run(" << x << ") = " << outer.run(x) << "\n";
  return 0;
}
