#include <iostream>

int main() {
  std::cout << "rlens cli placeholder\n";
  return 0;
}
