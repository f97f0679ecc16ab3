#include <string>
#include <vector>

#include "gbm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gbm::cli_main(std::move(args));
}
