// Acceptance suite: one pass/fail line per criterion. Populated criterion by
// criterion alongside the implementation.

#include <iostream>

int main() {
  std::cout << "acceptance suite placeholder\n";
  return 1;
}
