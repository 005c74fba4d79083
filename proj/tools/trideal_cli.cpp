#include <iostream>
#include <string>
#include <vector>

#include "trideal/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    trideal::RunOutcome out = trideal::dispatch(args);
    std::cout << out.report.dump(2) << "\n";
    return out.exit_code;
}
