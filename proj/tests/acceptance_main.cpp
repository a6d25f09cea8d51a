// Runs every acceptance criterion with fixed seeds and prints one line per
// criterion; exit code is the number of failures.

#include "relic/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    std::uint64_t seed = 20240601;
    int jobs = 1;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--seed" && i + 1 < argc) seed = std::strtoull(argv[++i], nullptr, 10);
        if (arg == "--jobs" && i + 1 < argc) jobs = std::atoi(argv[++i]);
    }
    auto results = relic::run_acceptance(seed, jobs);
    return relic::print_acceptance(results, std::cout);
}
