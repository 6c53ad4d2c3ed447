#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace vortex::cli {

struct RunConfig {
  std::string subcommand;
  double A = 1.0;
  double B = 0.0;
  std::string n = "1";          // single value, list a,b,c or range lo:hi:step
  int m_max = 20;
  std::string x_grid = "-3:0.95:40";  // lo:hi:count
  std::string b_grid;                 // lo:hi:count for the regime map
  bool map = false;
  std::string form = "all";
  int grid = 129;
  double tol = 0.0;  // 0 selects the command default
  std::string format = "csv";
  std::string output;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  // potentials
  int identity = 0;  // 0 runs all eight
  int mode = 1;
  std::string at = "0.5,0";
  std::string h_coeffs = "1";
  std::string k_coeffs = "1";
  int radial_nodes = 400;
  int angular_nodes = 512;
  // orbit
  double omega = 0.0;
  std::string z = "0.5,0";
  double amp = 0.0;
  double x = 0.0;  // transversality: explicit x instead of the computed eigenvalue
  bool has_x = false;
  std::string suite = "all";
  std::string check;
  bool dump_config = false;
  int threads = 1;
};

// Parses argv, runs the subcommand and returns the exit status (0 ok, 2 validation, 3 numerical).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vortex::cli
