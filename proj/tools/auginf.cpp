#include "auginf/cli/commands.hpp"

#include <string>
#include <vector>

int main(int argc, char** argv) { return auginf::cli::run(std::vector<std::string>(argv + 1, argv + argc)); }
