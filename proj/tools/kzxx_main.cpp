#include <cstdio>

int main() {
  std::puts("kzxx: placeholder");
  return 0;
}
