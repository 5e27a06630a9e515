#include <cstdlib>
#include <iostream>
#include <string>

#include "odlab/acceptance.hpp"

// usage: odlab_acceptance [-v] [criterion ids...]
int main(int argc, char** argv)
{
    odlab::AcceptanceOptions opt;
    bool verbose = false;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "-v")
            verbose = true;
        else
            opt.only.insert(std::atoi(a.c_str()));
    }
    opt.on_result = [verbose](const odlab::CriterionResult& r) {
        std::cout << odlab::format_line(r) << "\n";
        if (verbose || !r.pass)
            for (auto& d : r.details)
                std::cout << "    " << d << "\n";
        std::cout.flush();
    };
    bool all = true;
    for (auto& r : odlab::run_acceptance(opt))
        all = all && r.pass;
    std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << "\n";
    return all ? 0 : 1;
}
