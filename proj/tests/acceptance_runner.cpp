// Release-criteria runner: one pass/fail line per criterion, nonzero exit on
// any failure. The same checks back `ctinfo validate`.
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "ctinfo/acceptance.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 20240801;
    auto pol = ctinfo::ensemble::policy::parallel;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
            seed = std::strtoull(argv[++i], nullptr, 10);
        if (std::strcmp(argv[i], "--serial") == 0) pol = ctinfo::ensemble::policy::serial;
    }

    bool all = true;
    for (const auto& r : ctinfo::acceptance::run_all(seed, pol)) {
        std::printf("%s  criterion %2d: %s  [measured %.6g, target %.6g, tol %s, %.1f s]\n",
                    r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.measured, r.target,
                    r.tolerance.c_str(), r.seconds);
        if (!r.pass) std::fputs(r.detail.c_str(), stdout);
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILURES");
    return all ? 0 : 1;
}
