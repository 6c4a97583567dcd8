#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "ctinfo/ensemble.hpp"

namespace ctinfo::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    double measured = 0.0;
    double target = 0.0;
    std::string tolerance;  // human-readable pass condition
    std::string detail;     // sub-checks, one per line
    bool pass = false;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

// Runs every release criterion at its pinned tolerance. Tolerances are sized
// so the outcomes are robust to the seed; tol_scale multiplies every numeric
// tolerance (0 forces failures and exercises the reporting path).
std::vector<CriterionResult> run_all(std::uint64_t seed = 20240801,
                                     ensemble::policy pol = ensemble::policy::parallel,
                                     double tol_scale = 1.0);

CriterionResult run_one(int id, std::uint64_t seed, ensemble::policy pol,
                        double tol_scale = 1.0);

}  // namespace ctinfo::acceptance
