#include <string>
#include <vector>

#include "summer/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return summer::cli::run(args);
}
