#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "test_env.hpp"

#include <cstring>
#include <string>

std::string g_cli_path;

int main(int argc, char** argv) {
  doctest::Context ctx;
  std::vector<char*> passthrough;
  for (int i = 0; i < argc; ++i) {
    if (std::strncmp(argv[i], "--cli=", 6) == 0)
      g_cli_path = argv[i] + 6;
    else
      passthrough.push_back(argv[i]);
  }
  ctx.applyCommandLine(static_cast<int>(passthrough.size()), passthrough.data());
  return ctx.run();
}
