#include "cli/commands.hpp"

int main(int argc, char** argv) {
#ifdef KERNMETRIC_FAULT_INJECTION
  return kernmetric::cli::main_entry(argc, argv, true);
#else
  return kernmetric::cli::main_entry(argc, argv, false);
#endif
}
