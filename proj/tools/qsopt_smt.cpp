// Standalone decision procedure for the verifier's QF_NRA queries.
// Speaks enough SMT-LIB 2 on stdin/stdout to be driven like `z3 -in`.
#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "qsopt/nra.hpp"

int main(int argc, char** argv) {
  if (argc > 1) {
    std::string arg = argv[1];
    if (arg != "-in" && arg != "--stdin") {
      std::ifstream in(arg);
      if (!in) {
        std::cerr << "cannot open " << arg << "\n";
        return 2;
      }
      std::stringstream buf;
      buf << in.rdbuf();
      std::cout << qsopt::NraEngine::run_script(buf.str());
      return 0;
    }
  }
  qsopt::NraEngine eng;
  std::string buf;
  char chunk[4096];
  while (!eng.exited()) {
    ssize_t got = read(0, chunk, sizeof chunk);
    if (got <= 0) break;
    buf.append(chunk, (size_t)got);
    eng.feed(buf, std::cout);
  }
  return 0;
}
