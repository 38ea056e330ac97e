#include <cstdio>
int main() { std::puts("alevor: placeholder"); return 0; }
