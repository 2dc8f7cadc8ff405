#pragma once

// Command-line front end. Kept in a header so the test suites can drive the
// exact same code path in-process.

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dfp/dfp.hpp"

namespace dfp::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kFormat = 2,
  kNumerical = 3,
  kDegenerate = 4,
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage:
    case ErrorKind::dimension:
    case ErrorKind::precondition: return kUsage;
    case ErrorKind::format:
    case ErrorKind::unsupported_shape: return kFormat;
    case ErrorKind::numerical: return kNumerical;
    case ErrorKind::degenerate:
    case ErrorKind::insufficient_samples: return kDegenerate;
  }
  return kNumerical;
}

namespace detail {

inline const std::map<std::string, Distribution> kDistributions{
    {"normal", Distribution::standard_normal},
    {"uniform", Distribution::uniform},
    {"gaussian", Distribution::normal},
};

struct NoiseFlags {
  std::uint64_t seed = 0;
  Distribution dist = Distribution::standard_normal;
  double mean = 0.0;
  double stddev = 1.0;

  void attach(CLI::App& cmd) {
    cmd.add_option("--seed", seed, "Noise seed")->capture_default_str();
    cmd.add_option("--dist", dist, "Noise distribution: normal, uniform (-1,1) or gaussian (--mean, --stddev)")
        ->transform(CLI::CheckedTransformer(kDistributions, CLI::ignore_case).description(""))
        ->type_name("{normal,uniform,gaussian}");
    cmd.add_option("--mean", mean, "Mean for --dist gaussian")->capture_default_str();
    cmd.add_option("--stddev", stddev, "Standard deviation for --dist gaussian")->capture_default_str();
  }

  NoiseSpec spec() const { return NoiseSpec{seed, dist, mean, stddev}; }
};

inline std::string read_text(const std::filesystem::path& path) {
  const auto bytes = io::read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  io::write_file_atomic(path, text);
}

}  // namespace detail

/// Runs the CLI on argv-style arguments (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diversified style transfer by orthogonal deep feature perturbation", "dfp"};
  app.require_subcommand(1);

  // gram
  std::string gram_in, gram_out;
  auto* gram_cmd = app.add_subcommand("gram", "Write the Gram matrix F F^T of a feature array");
  gram_cmd->add_option("input", gram_in, "Feature array (.npy, (C,H,W) or (C,N))")->required();
  gram_cmd->add_option("output", gram_out, "Output Gram array (.npy)")->required();

  // pwct
  std::string pwct_content, pwct_style, pwct_out;
  double pwct_lambda = kDefaultLambda, pwct_alpha = kDefaultAlpha, pwct_threshold = kDefaultThreshold;
  std::optional<double> pwct_content_threshold, pwct_style_threshold;
  detail::NoiseFlags pwct_noise;
  auto* pwct_cmd = app.add_subcommand("pwct", "Apply the perturbed whitening and coloring transform");
  pwct_cmd->add_option("content", pwct_content, "Content feature array")->required();
  pwct_cmd->add_option("style", pwct_style, "Style feature array")->required();
  pwct_cmd->add_option("output", pwct_out, "Output feature array")->required();
  pwct_cmd->add_option("--lambda", pwct_lambda, "Diversity strength in [0,1]")->capture_default_str();
  pwct_cmd->add_option("--alpha", pwct_alpha, "Stylization strength in [0,1]")->capture_default_str();
  pwct_cmd->add_option("--threshold", pwct_threshold, "Eigenvalue truncation threshold (both Grams)")
      ->capture_default_str();
  pwct_cmd->add_option("--content-threshold", pwct_content_threshold, "Override threshold for the content Gram");
  pwct_cmd->add_option("--style-threshold", pwct_style_threshold, "Override threshold for the style Gram");
  pwct_noise.attach(*pwct_cmd);

  // stylize
  std::string sty_content, sty_style, sty_out, sty_config, sty_profile;
  std::optional<std::uint64_t> sty_seed;
  unsigned sty_threads = 1;
  auto* sty_cmd = app.add_subcommand("stylize", "Run the multi-level stylization pipeline on PPM images");
  sty_cmd->add_option("content", sty_content, "Content image (.ppm)")->required();
  sty_cmd->add_option("style", sty_style, "Style image (.ppm)")->required();
  auto* config_opt = sty_cmd->add_option("--config", sty_config, "Pipeline configuration (JSON)");
  sty_cmd->add_option("--profile", sty_profile, "Built-in configuration: deep-only or all-levels")
      ->check(CLI::IsMember({"deep-only", "all-levels"}))
      ->excludes(config_opt);
  sty_cmd->add_option("--out", sty_out, "Output image (.ppm)")->required();
  sty_cmd->add_option("--seed", sty_seed, "Override the configuration's noise seed");
  sty_cmd->add_option("--threads", sty_threads, "Worker threads for patch encoding")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();

  // diversity
  std::string div_dir, div_out;
  auto* div_cmd = app.add_subcommand("diversity", "Mean pairwise pixel distance over a directory of PPM images");
  div_cmd->add_option("directory", div_dir, "Directory holding .ppm samples")->required();
  div_cmd->add_option("--out", div_out, "Write the JSON report here instead of stdout");

  // noise
  std::size_t noise_rank = 0;
  std::string noise_out;
  detail::NoiseFlags noise_flags;
  auto* noise_cmd = app.add_subcommand("noise", "Write a seeded random orthogonal matrix");
  noise_cmd->add_option("--rank", noise_rank, "Matrix dimension")->required()->check(CLI::PositiveNumber);
  noise_flags.attach(*noise_cmd);
  noise_cmd->add_option("output", noise_out, "Output array (.npy)")->required();

  // debug (hidden)
  std::string eig_in, eig_values, eig_vectors;
  auto* debug_cmd = app.add_subcommand("debug", "Test-harness helpers")->group("");
  debug_cmd->require_subcommand(1);
  auto* eig_cmd = debug_cmd->add_subcommand("eig-oracle", "Jacobi eigendecomposition of a Gram array");
  eig_cmd->add_option("input", eig_in, "Gram array (.npy)")->required();
  eig_cmd->add_option("--values", eig_values, "Eigenvalues output, shape (C,1)")->required();
  eig_cmd->add_option("--vectors", eig_vectors, "Eigenvectors output, shape (C,C), one per column")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "dfp: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*gram_cmd) {
      save_array(to_npy(gram(to_feature(load_array(gram_in)))), gram_out);
    } else if (*pwct_cmd) {
      PwctParams params;
      params.lambda = pwct_lambda;
      params.alpha = pwct_alpha;
      params.content_threshold = pwct_content_threshold.value_or(pwct_threshold);
      params.style_threshold = pwct_style_threshold.value_or(pwct_threshold);
      params.noise = pwct_noise.spec();
      const FeatureMap content = to_feature(load_array(pwct_content));
      const FeatureMap style = to_feature(load_array(pwct_style));
      const PwctResult result = pwct_detailed(content, style, params);
      for (const auto& w : result.diagnostics.warnings) err << "dfp: warning: " << w << "\n";
      save_array(to_npy(result.features), pwct_out);
    } else if (*sty_cmd) {
      PipelineConfig cfg = sty_config.empty()
                               ? default_config(parse_profile(sty_profile.empty() ? "deep-only" : sty_profile))
                               : parse_config(detail::read_text(sty_config));
      if (sty_seed) cfg.noise_seed = *sty_seed;
      const Image content = load_image(sty_content);
      const Image style = load_image(sty_style);
      const StylizeResult result = stylize_detailed(content, style, cfg, StylizeOptions{sty_threads});
      for (const auto& level : result.levels)
        for (const auto& w : level.diagnostics.warnings)
          err << "dfp: warning: patch " << level.patch << ": " << w << "\n";
      save_image(result.image(), sty_out);
    } else if (*div_cmd) {
      std::vector<std::filesystem::path> files;
      std::error_code ec;
      for (const auto& entry : std::filesystem::directory_iterator(div_dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".ppm") files.push_back(entry.path());
      if (ec) throw Error(ErrorKind::format, "cannot read directory '" + div_dir + "'");
      std::sort(files.begin(), files.end());
      std::vector<Image> samples;
      for (const auto& f : files) samples.push_back(load_image(f));
      const std::string text = report_to_json(diversity_score(samples)).dump() + "\n";
      if (div_out.empty())
        out << text;
      else
        detail::write_text(div_out, text);
    } else if (*noise_cmd) {
      save_array(to_npy(orthogonal_noise(noise_rank, noise_flags.spec()).matrix()), noise_out);
    } else if (*eig_cmd) {
      const EigenFactorization f = jacobi_eig(to_gram(load_array(eig_in)));
      save_array(to_npy(Matrix(f.eigenvalues)), eig_values);
      save_array(to_npy(f.eigenvectors), eig_vectors);
    }
  } catch (const Error& e) {
    err << "dfp: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "dfp: unexpected failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kSuccess;
}

}  // namespace dfp::cli
