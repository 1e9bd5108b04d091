#pragma once

#include <string>

// Path to the built CLI binary, passed by ctest as --cli=<path>.
extern std::string g_cli_path;
