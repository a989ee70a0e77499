#include <cstdio>

int main() {
    std::puts("cdarl: subcommands not wired up yet");
    return 1;
}
