#include "cli.hpp"

#include <cstdlib>
#include <iostream>
#include <unistd.h>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const bool color = isatty(STDERR_FILENO) && std::getenv("NO_COLOR") == nullptr;
  return wfb::cli::run(args, std::cout, std::cerr, color);
}
