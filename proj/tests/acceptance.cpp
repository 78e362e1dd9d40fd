// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <chrono>
#include <cstring>
#include <iostream>

#include <tkdv/verify.hpp>

using namespace tkdv;

int main(int argc, char **argv)
{
    bool verbose = false;
    for (int i = 1; i < argc; ++i) {
        verbose = verbose || std::strcmp(argv[i], "-v") == 0;
    }
    VerifyContext ctx(VerifyOptions{});
    int failures = 0;
    for (int id : criteria_for_group("all")) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = run_criterion(id, ctx);
        } catch (const std::exception &e) {
            r.id = id;
            r.pass = false;
            r.details.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << r.title << " (" << secs << " s)\n";
        if (verbose || !r.pass) {
            for (const auto &d : r.details) {
                std::cout << "    " << d << '\n';
            }
        }
        failures += r.pass ? 0 : 1;
    }
    std::cout << (12 - failures) << "/12 criteria pass\n";
    return failures;
}
