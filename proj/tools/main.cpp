#include "specp/cli.hpp"

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const specp::CliInvocation inv = specp::parse(args);
    return specp::run(inv);
  } catch (const specp::UsageError& e) {
    std::fprintf(stderr, "error: %s\n\n%s", e.what(), specp::usage_text().c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
