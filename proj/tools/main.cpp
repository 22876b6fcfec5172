#include <string>
#include <vector>

#include "tomosc/scenario.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return tomosc::cli::main_impl(args);
}
