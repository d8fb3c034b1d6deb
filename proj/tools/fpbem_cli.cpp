// Copyright the fpbem contributors.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fpbem/scene.hpp"

namespace {

std::vector<int> parse_size_list(const std::string& csv) {
  std::vector<int> sizes;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) sizes.push_back(std::stoi(item));
  return sizes;
}

std::vector<fpbem::scene::Method> parse_method_list(const std::string& csv) {
  std::vector<fpbem::scene::Method> methods;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) methods.push_back(fpbem::scene::parse_method(item));
  return methods;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpbem: boundary element solver for finite periodic acoustic scattering"};
  app.require_subcommand(1);

  std::string config, method, output;
  int threads = 0;
  bool verbose = false;

  CLI::App* run = app.add_subcommand("run", "execute a scene sweep");
  run->add_option("--config", config, "scene file")->required();
  run->add_option("--method", method, "override the scene method (dense|pbem|fmpbem)");
  run->add_option("--threads", threads, "worker count (0 = environment default)");
  run->add_option("--output", output, "override the output directory");
  run->add_flag("--verbose", verbose, "report per-frequency progress");

  std::string vary = "My", sizes_csv = "8,16,32,64", methods_csv = "dense,pbem,fmpbem";
  int reps = 20;
  CLI::App* bench = app.add_subcommand("bench", "time assembly and products across sizes");
  bench->add_option("--config", config, "scene file")->required();
  bench->add_option("--vary", vary, "size parameter: Mx|My|Mz|refinement");
  bench->add_option("--sizes", sizes_csv, "comma-separated size list");
  bench->add_option("--methods", methods_csv, "comma-separated method list");
  bench->add_option("--reps", reps, "products per timing batch");
  bench->add_option("--threads", threads, "worker count (0 = environment default)");
  bench->add_option("--output", output, "override the output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    fpbem::scene::Scene scene = fpbem::scene::parse_scene_file(config);
    fpbem::scene::RunOptions options;
    options.threads = threads;
    options.output_override = output;
    options.verbose = verbose;
    if (!method.empty()) options.method_override = fpbem::scene::parse_method(method);

    if (run->parsed()) return fpbem::scene::run_scene(scene, options);
    fpbem::scene::run_benchmark(scene, vary, parse_size_list(sizes_csv),
                                parse_method_list(methods_csv), reps, options);
    return 0;
  } catch (const fpbem::scene::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}
