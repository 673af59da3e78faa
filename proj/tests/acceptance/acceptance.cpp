// One PASS/FAIL line per acceptance criterion, each against a pinned wall-clock limit.
#include "voganish/cli/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <set>
#include <string>

using namespace voganish;

namespace {

// Seconds allowed per criterion.
double limit_for(int id) {
  switch (id) {
    case 1: return 5;
    case 2: return 30;
    case 3: return 3;
    case 4: return 120;
    case 5: return 120;
    case 6: return 1;
    case 7: return 1;
    case 8: return 120;
    case 9: return 600;
    case 10: return 240;
    case 11: return 1800;
    case 12: return 7200;
    case 13: return 1;
    case 14: return 600;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // --known-failure N: criterion N is expected to fail; the exit status ignores it but the line still says FAIL.
  std::set<int> known, only;
  std::uint64_t seed = 1;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--known-failure" && i + 1 < argc) known.insert(std::atoi(argv[++i]));
    else if (a == "--only" && i + 1 < argc) only.insert(std::atoi(argv[++i]));
    else if (a == "--seed" && i + 1 < argc) seed = std::strtoull(argv[++i], nullptr, 10);
    else {
      std::cerr << "usage: acceptance [--seed S] [--only N]... [--known-failure N]...\n";
      return 2;
    }
  }
  int unexpected = 0;
  for (int id = 1; id <= cli::criterion_count(); ++id) {
    if (!only.empty() && !only.count(id)) continue;
    auto c = cli::run_criterion(id, seed);
    const double lim = limit_for(id);
    const bool in_time = c.seconds < lim;
    const bool ok = c.passed && in_time;
    std::printf("%s %2d %-24s %8.3fs (limit %gs)%s\n", ok ? "PASS" : "FAIL", id, c.name.c_str(), c.seconds, lim,
                known.count(id) && !ok ? " [known failure]" : "");
    std::printf("        expected: %s\n        computed: %s\n", c.expected.c_str(), c.computed.c_str());
    if (!in_time) std::printf("        over the time limit\n");
    std::fflush(stdout);
    if (ok == static_cast<bool>(known.count(id))) ++unexpected;
  }
  return unexpected ? 1 : 0;
}
