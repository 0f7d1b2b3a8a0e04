#include <string>
#include <vector>

#include "curveflow/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return curveflow::run_cli(std::move(args));
}
