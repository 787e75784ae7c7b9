#include <string>
#include <vector>

#include "causalsurv/cli.hpp"

int main(int argc, char** argv) {
  return causalsurv::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
