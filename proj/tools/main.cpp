#include <string>
#include <vector>

#include "motrans/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return motrans::run_cli(args);
}
