#include <string>
#include <vector>

#include "sdg/cli/cli.hpp"

int main(int argc, char** argv) {
  return sdg::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
