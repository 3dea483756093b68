#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "anp/cli.hpp"

namespace {

void on_sigint(int) { anp::request_interrupt(); }

}  // namespace

int main(int argc, char** argv) {
  // No SA_RESTART: a blocked read returns EINTR so the wizard can save and exit.
  struct sigaction sa {};
  sa.sa_handler = on_sigint;
  sigemptyset(&sa.sa_mask);
  sa.sa_flags = 0;
  sigaction(SIGINT, &sa, nullptr);

  const bool color = std::getenv("ANP_NO_COLOR") == nullptr && isatty(STDOUT_FILENO) && isatty(STDERR_FILENO);
  std::vector<std::string> args(argv + 1, argv + argc);
  return anp::run_cli(args, std::cin, std::cout, std::cerr, color);
}
