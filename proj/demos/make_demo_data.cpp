// Writes the demo datasets into the directory given as the only argument.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "noisy/dataset_io.hpp"
#include "noisy/generators.hpp"

namespace fs = std::filesystem;
using namespace noisy;

namespace {

void write_values(const fs::path& p, const GroundTruth& g) {
  std::ofstream f(p);
  f.precision(17);
  f << "value\n";
  for (ItemId i = 0; i < g.size(); ++i) f << g.value(i) << '\n';
}

void write_matrix(const fs::path& p, const GroundTruth& g) {
  std::ofstream f(p);
  f.precision(17);
  f << g.size() << '\n';
  for (ItemId i = 0; i < g.size(); ++i) {
    for (ItemId j = 0; j < g.size(); ++j) f << (j ? " " : "") << g.distance(i, j);
    f << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make-demo-data <dir>\n";
    return 2;
  }
  const fs::path dir = argv[1];
  fs::create_directories(dir);
  write_values(dir / "values_1000.csv", gen_uniform_values(1000, 1));
  write_values(dir / "chain_8.csv", gen_geometric_chain(8, 1.0, 0.01));
  {
    std::ofstream f(dir / "blobs_300.csv");
    write_points_csv(f, gen_planted_clusters(300, 3, 10.0, 60, 2));
  }
  {
    std::ofstream f(dir / "points_120.csv");
    write_points_csv(f, gen_uniform_points(120, 2, 3));
  }
  write_matrix(dir / "line5.txt", line5::instance());
  return 0;
}
