#include <string>
#include <vector>

#include "irsched/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return irsched::cli::run_cli(args);
}
