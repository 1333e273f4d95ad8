// Regenerates the shipped MDP fixture files from the builtin definitions.
#include <filesystem>
#include <iostream>

#include "eop/mdp.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_fixtures <output-dir>\n";
    return 2;
  }
  const std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);
  for (const char* name : {"gridworld8", "gridworld8-det"}) {
    const auto path = dir / (std::string(name) + ".mdp");
    eop::save_mdp(eop::builtin_mdp(name), path.string());
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}
