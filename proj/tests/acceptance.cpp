// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit status 0 iff everything passed.

#include <iostream>

#include "paralog/selftest.hpp"

int main() {
    paralog::ExperimentConfig config;  // defaults: 512x512 box, 50 seeds, T = 1
    auto results = paralog::run_acceptance(config, std::cout);
    return paralog::all_passed(results) ? 0 : 1;
}
