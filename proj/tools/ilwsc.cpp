#include <cstdio>
int main() { std::puts("cli not yet implemented"); return 2; }
