#include <string>
#include <vector>

#include "spinchan/cli.hpp"

int main(int argc, char** argv) {
    return spinchan::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
