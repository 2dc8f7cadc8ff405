// Stylize one content image several times with different noise seeds and
// report how far apart the results are.
//
//   diversify content.ppm style.ppm out_dir [count] [lambda]

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "dfp/dfp.hpp"

int main(int argc, char** argv) {
  if (argc < 4) {
    std::cerr << "usage: " << argv[0] << " content.ppm style.ppm out_dir [count] [lambda]\n";
    return 1;
  }
  const std::filesystem::path out_dir = argv[3];
  const int count = argc > 4 ? std::atoi(argv[4]) : 4;
  try {
    const dfp::Image content = dfp::load_image(argv[1]);
    const dfp::Image style = dfp::load_image(argv[2]);
    auto cfg = dfp::default_config(dfp::Profile::deep_only);
    if (argc > 5) cfg.lambda[0] = std::stod(argv[5]);

    std::filesystem::create_directories(out_dir);
    std::vector<dfp::Image> samples;
    for (int seed = 0; seed < count; ++seed) {
      cfg.noise_seed = static_cast<std::uint64_t>(seed);
      samples.push_back(dfp::stylize(content, style, cfg));
      dfp::save_image(samples.back(), out_dir / ("sample_" + std::to_string(seed) + ".ppm"));
    }
    std::cout << dfp::report_to_json(dfp::diversity_score(samples)).dump(2) << "\n";
  } catch (const dfp::Error& e) {
    std::cerr << "diversify: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
